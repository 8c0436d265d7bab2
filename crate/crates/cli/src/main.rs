//! Command-line front end: torus audits, jet-group character tables, the
//! parahoric Yu construction and its Green-function identities, and the
//! imported-table counterexample search.

use clap::{Parser, Subcommand};
use jetlie::chartab::{dixon_character_table, litmus_match, verify_table};
use jetlie::classfn::abelian_characters;
use jetlie::counterexample::{dl_dimension, search_counterexamples, TorusClassData};
use jetlie::ctbl::{load_g2_f3_table, parse_character_table, serialize_character_table};
use jetlie::cyclotomic::Cyc;
use jetlie::group::{build_group, GroupKind, TorusKind, DEFAULT_GROUP_CAP};
use jetlie::report::ReportTable;
use jetlie::roots::load_root_system;
use jetlie::torus::{
    count_non_very_regular, count_regular_characters, enumerate_torus_points, threshold_scan,
    torus_order, DEFAULT_ENUMERATION_CAP,
};
use jetlie::yu::{
    build_circ_tau, build_zero_toral_datum, circ_tau, green_fks, orthogonality_check,
    reconstruct_dl_character, verify_char_formula, zero_toral_characters,
};

#[derive(Parser)]
#[command(name = "jetlie", version, about = "exact arithmetic for jet groups of Lie type")]
struct Cli {
    /// Output format: markdown or csv
    #[arg(long, default_value = "markdown", global = true)]
    format: String,
    /// Show float shadows next to exact values
    #[arg(long, global = true)]
    float: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Orders, very-regular counts and regular characters of a torus form
    AuditTori {
        #[arg(long, value_name = "TYPE")]
        r#type: String,
        #[arg(long, default_value = "coxeter")]
        class: String,
        #[arg(long)]
        q: u64,
    },
    /// Henniart threshold scan over a range of q
    HenniartScan {
        #[arg(long, value_name = "TYPE")]
        r#type: String,
        #[arg(long, default_value = "coxeter")]
        class: String,
        /// range like 2..13 or a comma list
        #[arg(long)]
        q: String,
        /// which verdict columns to show: weak, strong or both
        #[arg(long, default_value = "both")]
        mode: String,
    },
    /// Build a jet group and print its class data
    BuildGroup {
        #[arg(long, default_value = "sl2")]
        kind: String,
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 0)]
        r: u32,
    },
    /// Dixon-Burnside character table of a jet group
    CharTable {
        #[arg(long, default_value = "sl2")]
        kind: String,
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 0)]
        r: u32,
    },
    /// Build the parahoric Yu package for a 0-toral character
    BuildYu {
        #[arg(long)]
        q: u64,
        /// residue characteristic, validated against q
        #[arg(long)]
        p: Option<u64>,
        #[arg(long, default_value_t = 1)]
        r: u32,
        /// index into the list of valid 0-toral characters
        #[arg(long, default_value_t = 0)]
        theta: usize,
        /// verify the character formula identity
        #[arg(long)]
        verify: bool,
    },
    /// Green function of a Yu package on unipotent classes
    Green {
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 1)]
        r: u32,
        #[arg(long, default_value_t = 0)]
        theta: usize,
    },
    /// Green-function orthogonality for a pair of characters
    Orthogonality {
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 1)]
        r: u32,
        #[arg(long, default_value_t = 0)]
        theta1: usize,
        #[arg(long, default_value_t = 1)]
        theta2: usize,
    },
    /// The Fourier-transform identity over the jet Lie algebra
    SpringerCheck {
        #[arg(long)]
        q: u64,
        /// residue characteristic, validated against q
        #[arg(long)]
        p: Option<u64>,
        #[arg(long, default_value_t = 1)]
        r: u32,
        #[arg(long, default_value_t = 0)]
        theta: usize,
        /// rescale the additive character
        #[arg(long, default_value_t = 1)]
        psi_scale: u16,
        /// also dump the coadjoint orbit of the dual element
        #[arg(long)]
        dump_orbit: bool,
    },
    /// Pattern search over the irreducibles of a jet group
    Litmus {
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 0)]
        r: u32,
        /// index of a regular character of the elliptic torus
        #[arg(long, default_value_t = 0)]
        theta: usize,
    },
    /// Reproduce the imported-table counterexample analysis
    SearchCounterexamples {
        /// path to a .ctbl file; defaults to the shipped G2(F3) table
        #[arg(long)]
        table: Option<String>,
        #[arg(long, default_value_t = 1)]
        theta: u64,
        #[arg(long, default_value_t = 729)]
        steinberg: u128,
    },
    /// Parse, verify and echo a character table file
    ImportTable { path: String },
    /// dim R = |G| / (dim St |T|)
    DlDim {
        #[arg(long)]
        group_order: u128,
        #[arg(long)]
        steinberg: u128,
        #[arg(long)]
        torus: u128,
    },
}

fn check_p(q: u64, p: Option<u64>) -> Result<(), String> {
    if let Some(p) = p {
        let (actual, _) = jetlie::torus::prime_power(q)
            .ok_or_else(|| format!("q = {} is not a prime power", q))?;
        if actual != p {
            return Err(format!("q = {} has residue characteristic {}, not {}", q, actual, p));
        }
    }
    Ok(())
}

fn group_kind(s: &str) -> Result<GroupKind, String> {
    match s.to_ascii_lowercase().as_str() {
        "sl2" => Ok(GroupKind::Sl2),
        "gl2" => Ok(GroupKind::Gl2),
        other => Err(format!("unknown group kind `{}`", other)),
    }
}

fn parse_q_list(s: &str) -> Result<Vec<u64>, String> {
    if let Some((a, b)) = s.split_once("..") {
        let a: u64 = a.parse().map_err(|_| "bad q range".to_string())?;
        let b: u64 = b.parse().map_err(|_| "bad q range".to_string())?;
        Ok((a..=b).collect())
    } else {
        s.split(',')
            .map(|t| t.parse().map_err(|_| format!("bad q value `{}`", t)))
            .collect()
    }
}

fn show(v: &Cyc, float: bool) -> String {
    if float {
        let (re, im) = v.to_complex();
        format!("{} ({:.6}{:+.6}i)", v.to_e_string(), re, im)
    } else {
        v.to_e_string()
    }
}

fn run(cli: Cli) -> Result<(), String> {
    let fmt = cli.format.as_str();
    match cli.command {
        Command::AuditTori { r#type, class, q } => {
            let rs = load_root_system(&r#type).map_err(|e| e.to_string())?;
            let wc = rs.class(&class).map_err(|e| e.to_string())?;
            let order = torus_order(&rs, wc, q).map_err(|e| e.to_string())?;
            let mut t = ReportTable::new(&["quantity", "value"]);
            t.push(vec!["|T(F_q)|".into(), order.to_string()]);
            match count_non_very_regular(&rs, wc, q, DEFAULT_ENUMERATION_CAP) {
                Ok(n) => t.push(vec!["non-very-regular".into(), n.to_string()]),
                Err(e) => t.push(vec!["non-very-regular".into(), format!("error: {}", e)]),
            }
            match count_regular_characters(&rs, wc, q, DEFAULT_ENUMERATION_CAP) {
                Ok(n) => t.push(vec!["regular characters".into(), n.to_string()]),
                Err(e) => t.push(vec!["regular characters".into(), format!("error: {}", e)]),
            }
            if let Ok((pts, _)) = enumerate_torus_points(&rs, wc, q, DEFAULT_ENUMERATION_CAP) {
                let divs: Vec<String> = pts.gens.iter().map(|g| g.order.to_string()).collect();
                t.push(vec!["elementary divisors".into(), divs.join(" x ")]);
            }
            print!("{}", t.render(fmt));
        }
        Command::HenniartScan { r#type, class, q, mode } => {
            let rs = load_root_system(&r#type).map_err(|e| e.to_string())?;
            let wc = rs.class(&class).map_err(|e| e.to_string())?;
            let qs = parse_q_list(&q)?;
            let (show_weak, show_strong) = match mode.as_str() {
                "weak" => (true, false),
                "strong" => (false, true),
                "both" => (true, true),
                other => return Err(format!("unknown mode `{}`", other)),
            };
            let mut headers = vec!["q", "|T|", "nvreg"];
            if show_weak {
                headers.push("weak");
            }
            if show_strong {
                headers.push("strong");
            }
            let rows = threshold_scan(&rs, wc, &qs, DEFAULT_ENUMERATION_CAP);
            let mut t = ReportTable::new(&headers);
            for (qv, row) in rows {
                match row {
                    Ok(r) => {
                        let mut cells = vec![
                            qv.to_string(),
                            r.order.to_string(),
                            r.non_very_regular.to_string(),
                        ];
                        if show_weak {
                            cells.push(r.weak_holds.to_string());
                        }
                        if show_strong {
                            cells.push(r.strong_holds.to_string());
                        }
                        t.push(cells);
                    }
                    Err(e) => {
                        let mut cells = vec![qv.to_string(), format!("error: {}", e), "".into()];
                        if show_weak {
                            cells.push("".into());
                        }
                        if show_strong {
                            cells.push("".into());
                        }
                        t.push(cells);
                    }
                }
            }
            print!("{}", t.render(fmt));
        }
        Command::BuildGroup { kind, q, r } => {
            let g = build_group(group_kind(&kind)?, q, r, DEFAULT_GROUP_CAP)
                .map_err(|e| e.to_string())?;
            let cls = g.classes();
            let mut t = ReportTable::new(&["class", "size", "order", "centralizer", "flags"]);
            let names = jetlie::chartab::class_names_from_orders(&cls.element_orders);
            for (c, name) in names.iter().enumerate() {
                let f = &cls.flags[c];
                let mut tags = Vec::new();
                if f.central {
                    tags.push("central");
                }
                if f.unipotent {
                    tags.push("unip");
                }
                if f.regular_semisimple {
                    tags.push("reg.ss");
                } else if f.semisimple {
                    tags.push("ss");
                }
                t.push(vec![
                    name.clone(),
                    cls.sizes[c].to_string(),
                    cls.element_orders[c].to_string(),
                    cls.centralizer_orders[c].to_string(),
                    tags.join(" "),
                ]);
            }
            println!("order {}", g.order());
            print!("{}", t.render(fmt));
        }
        Command::CharTable { kind, q, r } => {
            let g = build_group(group_kind(&kind)?, q, r, DEFAULT_GROUP_CAP)
                .map_err(|e| e.to_string())?;
            let tab = dixon_character_table(&g).map_err(|e| e.to_string())?;
            print!(
                "{}",
                serialize_character_table(
                    &tab,
                    &format!("{}(F_{}[t]/t^{})", kind.to_uppercase(), q, r + 1)
                )
            );
        }
        Command::BuildYu { q, p, r, theta, verify } => {
            check_p(q, p)?;
            let g = build_group(GroupKind::Sl2, q, r, DEFAULT_GROUP_CAP)
                .map_err(|e| e.to_string())?;
            let chars = zero_toral_characters(&g);
            let chi = chars
                .get(theta)
                .ok_or_else(|| format!("theta index out of range (have {})", chars.len()))?;
            let datum =
                build_zero_toral_datum(&g, chi.clone(), None).map_err(|e| e.to_string())?;
            let pkg = build_circ_tau(&g, &datum).map_err(|e| e.to_string())?;
            println!("|K| = {}, dim rho = {}", pkg.circ_k.order(), pkg.rho_dim);
            let tau = circ_tau(&g, &pkg);
            let cls = g.classes();
            let id_class = cls.class_of[g.identity_index() as usize] as usize;
            println!("tau(1) = {}", show(&tau.values[id_class], cli.float));
            let ip = jetlie::classfn::inner_product(&g, &tau, &tau).map_err(|e| e.to_string())?;
            println!("<tau, tau> = {}", show(&ip, cli.float));
            if verify {
                let rep = verify_char_formula(&g, &datum, &pkg).map_err(|e| e.to_string())?;
                println!(
                    "character formula: sign={:+}, defects={}",
                    rep.global_sign,
                    rep.defects.len()
                );
                if !rep.defects.is_empty() {
                    return Err("character formula identity failed".into());
                }
                let rec =
                    reconstruct_dl_character(&g, &datum, &pkg).map_err(|e| e.to_string())?;
                match rec.matches_tau_with_sign {
                    Some(s) => println!("reconstruction matches tau with sign {:+}", s),
                    None => return Err("reconstruction mismatch".into()),
                }
            }
        }
        Command::Green { q, r, theta } => {
            let g = build_group(GroupKind::Sl2, q, r, DEFAULT_GROUP_CAP)
                .map_err(|e| e.to_string())?;
            let chars = zero_toral_characters(&g);
            let chi = chars
                .get(theta)
                .ok_or_else(|| format!("theta index out of range (have {})", chars.len()))?;
            let datum =
                build_zero_toral_datum(&g, chi.clone(), None).map_err(|e| e.to_string())?;
            let pkg = build_circ_tau(&g, &datum).map_err(|e| e.to_string())?;
            let green = green_fks(&g, &pkg);
            let cls = g.classes();
            let names = jetlie::chartab::class_names_from_orders(&cls.element_orders);
            let mut t = ReportTable::new(&["class", "size", "value"]);
            for (c, v) in &green.values {
                t.push(vec![
                    names[*c].clone(),
                    cls.sizes[*c].to_string(),
                    show(v, cli.float),
                ]);
            }
            print!("{}", t.render(fmt));
        }
        Command::Orthogonality { q, r, theta1, theta2 } => {
            let g = build_group(GroupKind::Sl2, q, r, DEFAULT_GROUP_CAP)
                .map_err(|e| e.to_string())?;
            let chars = zero_toral_characters(&g);
            let get = |i: usize| {
                chars
                    .get(i)
                    .cloned()
                    .ok_or_else(|| format!("theta index {} out of range (have {})", i, chars.len()))
            };
            let d1 = build_zero_toral_datum(&g, get(theta1)?, None).map_err(|e| e.to_string())?;
            let d2 = build_zero_toral_datum(&g, get(theta2)?, None).map_err(|e| e.to_string())?;
            let p1 = build_circ_tau(&g, &d1).map_err(|e| e.to_string())?;
            let p2 = build_circ_tau(&g, &d2).map_err(|e| e.to_string())?;
            let rep = orthogonality_check(&g, &d1, &p1, &d2, &p2).map_err(|e| e.to_string())?;
            println!("lhs = {}", show(&rep.lhs, cli.float));
            println!("rhs = {}", show(&rep.rhs, cli.float));
            if rep.lhs != rep.rhs {
                return Err("orthogonality identity failed".into());
            }
            println!("identity holds");
        }
        Command::SpringerCheck { q, p, r, theta, psi_scale, dump_orbit } => {
            check_p(q, p)?;
            let g = build_group(GroupKind::Sl2, q, r, DEFAULT_GROUP_CAP)
                .map_err(|e| e.to_string())?;
            let chars = zero_toral_characters(&g);
            let chi = chars
                .get(theta)
                .ok_or_else(|| format!("theta index out of range (have {})", chars.len()))?;
            let datum =
                build_zero_toral_datum(&g, chi.clone(), None).map_err(|e| e.to_string())?;
            let pkg = build_circ_tau(&g, &datum).map_err(|e| e.to_string())?;
            if dump_orbit {
                let x = jetlie::lie::generic_dual_element(&g, &datum).map_err(|e| e.to_string())?;
                let (orbit, stab) = jetlie::lie::coadjoint_orbit(&g, &x);
                println!("dual element (ring indices a b c d): {:?}", x);
                println!("orbit size {} stabilizer {}", orbit.len(), stab);
                for key in &orbit {
                    let m = [
                        ((key >> 48) & 0xffff) as u16,
                        ((key >> 32) & 0xffff) as u16,
                        ((key >> 16) & 0xffff) as u16,
                        (key & 0xffff) as u16,
                    ];
                    println!("{} {} {} {}", m[0], m[1], m[2], m[3]);
                }
            }
            let rep = jetlie::lie::verify_springer(&g, &datum, &pkg, psi_scale)
                .map_err(|e| e.to_string())?;
            println!(
                "sign={:+}, max_defect={}, orbit={}, factor=q^{}={}, checked {} elements",
                rep.global_sign,
                rep.defects.len(),
                rep.orbit_size,
                g.r + 1,
                rep.factor,
                rep.checked
            );
            if !rep.defects.is_empty() {
                return Err("identity failed".into());
            }
        }
        Command::Litmus { q, r, theta } => {
            let g = build_group(GroupKind::Sl2, q, r, DEFAULT_GROUP_CAP)
                .map_err(|e| e.to_string())?;
            let tab = dixon_character_table(&g).map_err(|e| e.to_string())?;
            let torus = g.torus_subgroup(TorusKind::Elliptic);
            let st = jetlie::classfn::abelian_structure(&g, &torus);
            let chars = abelian_characters(&st);
            let w = g
                .weyl_transporter(&torus, &torus)
                .into_iter()
                .find(|&x| !torus.contains(x))
                .ok_or("no Weyl element")?;
            let wm = g.element(w);
            let regular: Vec<_> = chars
                .iter()
                .filter(|c| {
                    torus.elements.iter().any(|&t| {
                        let tw = g.index_of(&g.conj(&wm, &g.element(t)));
                        c.table[torus.local(tw).unwrap() as usize]
                            != c.table[torus.local(t).unwrap() as usize]
                    })
                })
                .collect();
            let chi = regular.get(theta).ok_or_else(|| {
                format!("theta index out of range (have {} regular)", regular.len())
            })?;
            let cls = g.classes();
            let vr = g.very_regular_elements(&torus);
            let mut pattern: Vec<(usize, Cyc)> = Vec::new();
            let mut seen = vec![false; cls.reps.len()];
            for &t in &vr.in_torus {
                let c = cls.class_of[t as usize] as usize;
                if seen[c] {
                    continue;
                }
                seen[c] = true;
                let tw = g.index_of(&g.conj(&wm, &g.element(t)));
                let v = Cyc::root_of_unity(
                    chi.conductor as u32,
                    chi.table[torus.local(t).unwrap() as usize] as i64,
                )
                .add(&Cyc::root_of_unity(
                    chi.conductor as u32,
                    chi.table[torus.local(tw).unwrap() as usize] as i64,
                ));
                pattern.push((c, v));
            }
            for (c, f) in cls.flags.iter().enumerate() {
                if f.very_regular && !seen[c] {
                    pattern.push((c, Cyc::zero(1)));
                }
            }
            let matches = litmus_match(&tab, &pattern, &[1, -1]);
            let mut t = ReportTable::new(&["row", "degree", "sign"]);
            for (row, sign) in &matches {
                t.push(vec![
                    tab.row_names[*row].clone(),
                    tab.rows[*row][0].to_e_string(),
                    format!("{:+}", sign),
                ]);
            }
            println!("matches: {}", matches.len());
            print!("{}", t.render(fmt));
        }
        Command::SearchCounterexamples { table, theta, steinberg } => {
            let tab = match table {
                Some(path) => {
                    let text = std::fs::read_to_string(&path).map_err(|e| e.to_string())?;
                    parse_character_table(&text).map_err(|e| e.to_string())?
                }
                None => load_g2_f3_table().map_err(|e| e.to_string())?,
            };
            let torus = TorusClassData::g2_f3_coxeter();
            let dim = dl_dimension(tab.group_order, steinberg, torus.order as u128)
                .map_err(|e| e.to_string())?;
            let rep =
                search_counterexamples(&tab, &torus, theta, dim).map_err(|e| e.to_string())?;
            println!("dl dimension: {}", dim);
            let mut t = ReportTable::new(&["row", "sign", "unipotent", "<., R>_reg", "<., R>_nreg"]);
            for &(r, s) in &rep.matches {
                let dich = rep
                    .dichotomy
                    .iter()
                    .find(|(rr, _, _)| *rr == r)
                    .map(|(_, a, b)| (a.to_e_string(), b.to_e_string()))
                    .unwrap_or_default();
                t.push(vec![
                    tab.row_names[r].clone(),
                    format!("{:+}", s),
                    tab.unipotent_rows[r].to_string(),
                    dich.0,
                    dich.1,
                ]);
            }
            print!("{}", t.render(fmt));
            println!(
                "non-unipotent matches: {}",
                rep.non_unipotent_matches
                    .iter()
                    .map(|&(r, _)| tab.row_names[r].clone())
                    .collect::<Vec<_>>()
                    .join(" ")
            );
        }
        Command::ImportTable { path } => {
            let text = std::fs::read_to_string(&path).map_err(|e| e.to_string())?;
            let tab = parse_character_table(&text).map_err(|e| e.to_string())?;
            let rep = verify_table(&tab);
            println!(
                "parsed {} classes, |G| = {}, verification {}",
                tab.class_names.len(),
                tab.group_order,
                if rep.ok() { "passed" } else { "FAILED" }
            );
            print!("{}", serialize_character_table(&tab, "imported"));
        }
        Command::DlDim { group_order, steinberg, torus } => {
            let d = dl_dimension(group_order, steinberg, torus).map_err(|e| e.to_string())?;
            println!("{}", d);
        }
    }
    Ok(())
}

fn main() {
    let cli = Cli::parse();
    if let Err(msg) = run(cli) {
        eprintln!("error: {}", msg);
        std::process::exit(1);
    }
}
