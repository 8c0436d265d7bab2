//! Depth-r parabolic induction I and Jacquet restriction J at parahoric
//! level, for the standard Borel P = M N of a jet group.
//!
//! I inflates a character of the diagonal level along P K_(s+) and induces to
//! the full group; J takes N-coinvariants at the character level. The first
//! adjoint theorem <sigma, I(sigma_M)> = <J(sigma), sigma_M> holds exactly.

use crate::classfn::{
    abelian_characters, abelian_structure, induce, AbelianCharacter, AbelianStructure,
    ClassFunction, SubgroupFunction,
};
use crate::cyclotomic::{Cyc, Rat};
use crate::error::{Error, Result};
use crate::group::{JetGroup, SubgroupModel, TorusKind};
use num::bigint::BigInt;

pub struct ParabolicData {
    /// upper-triangular subgroup
    pub borel: SubgroupModel,
    /// diagonal subgroup (the M level)
    pub levi: SubgroupModel,
    /// upper unipotent subgroup
    pub unipotent_radical: SubgroupModel,
    pub levi_structure: AbelianStructure,
}

pub fn standard_borel(g: &JetGroup) -> ParabolicData {
    let borel = g.subgroup_from_predicate(|m| m[2] == 0);
    let levi = g.torus_subgroup(TorusKind::Split);
    let unipotent_radical = g.subgroup_from_predicate(|m| m[0] == 1 && m[2] == 0 && m[3] == 1);
    let levi_structure = abelian_structure(g, &levi);
    ParabolicData {
        borel,
        levi,
        unipotent_radical,
        levi_structure,
    }
}

/// All characters of the Levi level that are trivial on M n K_(s+), i.e.
/// the valid inputs of the depth-s induction.
pub fn levi_characters_of_depth(
    g: &JetGroup,
    pd: &ParabolicData,
    s: u32,
) -> Result<Vec<AbelianCharacter>> {
    let kernel = g.moy_prasad(s, 1, true)?;
    let m_cap_k: Vec<u32> = pd
        .levi
        .elements
        .iter()
        .filter(|&&i| kernel.contains(i))
        .map(|&i| pd.levi.local(i).unwrap())
        .collect();
    Ok(abelian_characters(&pd.levi_structure)
        .into_iter()
        .filter(|chi| chi.is_trivial_on(&m_cap_k))
        .collect())
}

/// The Levi component of an upper-triangular matrix.
fn levi_part(m: &[u16; 4]) -> [u16; 4] {
    [m[0], 0, 0, m[3]]
}

/// Depth-s parabolic induction: Ind along P K_(s+) of the inflation of a
/// Levi-level character. Errors when the character is not trivial on the
/// required kernel.
pub fn parabolic_induce_depth(
    g: &JetGroup,
    pd: &ParabolicData,
    sigma_m: &AbelianCharacter,
    s: u32,
) -> Result<ClassFunction> {
    let kernel = g.moy_prasad(s, 1, true)?;
    // precondition: sigma_M trivial on M n K_(s+)
    for &i in &pd.levi.elements {
        if kernel.contains(i) && sigma_m.value_at(&pd.levi, i).unwrap() != Cyc::one() {
            return Err(Error::DepthMismatch);
        }
    }
    // the inducing subgroup P K_(s+)
    let mut member = vec![false; g.order()];
    for &p in &pd.borel.elements {
        let pm = g.element(p);
        for &k in &kernel.elements {
            let x = g.mul(&pm, &g.element(k));
            member[g.index_of(&x) as usize] = true;
        }
    }
    let elements: Vec<u32> = (0..g.order() as u32)
        .filter(|&i| member[i as usize])
        .collect();
    let pk = g.subgroup_from_predicate(|m| member[g.index_of(m) as usize]);
    drop(elements);
    // inflated character: value at p k is sigma_M(levi part of p); the
    // precondition makes this independent of the decomposition
    let mut values: Vec<Option<Cyc>> = vec![None; pk.order()];
    for &p in &pd.borel.elements {
        let pm = g.element(p);
        let lv = g.index_of(&levi_part(&pm));
        let v = sigma_m.value_at(&pd.levi, lv).unwrap();
        for &k in &kernel.elements {
            let x = g.index_of(&g.mul(&pm, &g.element(k)));
            let loc = pk.local(x).unwrap() as usize;
            if let Some(prev) = &values[loc] {
                debug_assert_eq!(prev, &v, "inflation not well defined");
            } else {
                values[loc] = Some(v.clone());
            }
        }
    }
    let f = SubgroupFunction {
        values: values.into_iter().map(|v| v.unwrap()).collect(),
    };
    Ok(induce(g, &pk, &f))
}

/// Jacquet functor at the character level: J(sigma)(m) = (1/|N|) sum over
/// n in N of sigma(m n), returned as a function on the Levi level.
pub fn jacquet_depth(g: &JetGroup, pd: &ParabolicData, sigma: &ClassFunction) -> SubgroupFunction {
    let n_order = pd.unipotent_radical.order();
    let values: Vec<Cyc> = pd
        .levi
        .elements
        .iter()
        .map(|&mi| {
            let mm = g.element(mi);
            let mut acc = Cyc::zero(1);
            for &n in &pd.unipotent_radical.elements {
                let x = g.mul(&mm, &g.element(n));
                acc = acc.add(sigma.at_element(g, g.index_of(&x)));
            }
            acc.scale(&Rat::new(BigInt::from(1), BigInt::from(n_order)))
        })
        .collect();
    SubgroupFunction { values }
}

/// (1/|M|) sum over the Levi of f conj(chi).
pub fn levi_inner_product(
    pd: &ParabolicData,
    f: &SubgroupFunction,
    chi: &AbelianCharacter,
) -> Cyc {
    let mut acc = Cyc::zero(1);
    for loc in 0..pd.levi.order() {
        acc = acc.add(&f.values[loc].mul(&chi.value(loc as u32).conj()));
    }
    acc.scale(&Rat::new(BigInt::from(1), BigInt::from(pd.levi.order())))
}
