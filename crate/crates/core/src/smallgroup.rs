//! Finite groups given by an explicit multiplication table, with generic
//! class data. Used for auxiliary groups (Heisenberg extensions) whose
//! character tables feed the Weil-operator normalization.

#[derive(Clone)]
pub struct SmallGroup {
    pub n: usize,
    mul: Vec<u32>,
    pub inv: Vec<u32>,
    pub id: u32,
}

pub struct SmallClassData {
    pub k: usize,
    pub sizes: Vec<usize>,
    pub class_of: Vec<u32>,
    pub reps: Vec<u32>,
    pub element_orders: Vec<u64>,
    pub inverse_class: Vec<usize>,
}

impl SmallGroup {
    pub fn from_mul_table(mul: Vec<u32>, n: usize) -> SmallGroup {
        assert_eq!(mul.len(), n * n);
        // identity
        let id = (0..n as u32)
            .find(|&e| (0..n as u32).all(|x| mul[(e as usize) * n + x as usize] == x))
            .expect("no identity");
        let mut inv = vec![u32::MAX; n];
        for a in 0..n {
            for b in 0..n {
                if mul[a * n + b] == id {
                    inv[a] = b as u32;
                    break;
                }
            }
            assert!(inv[a] != u32::MAX, "element without inverse");
        }
        SmallGroup {
            n,
            mul,
            inv,
            id,
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[a as usize * self.n + b as usize]
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        let mut acc = self.id;
        for _ in 0..e {
            acc = self.mul(acc, a);
        }
        acc
    }

    pub fn element_order(&self, a: u32) -> u64 {
        let mut x = a;
        let mut o = 1;
        while x != self.id {
            x = self.mul(x, a);
            o += 1;
        }
        o
    }

    pub fn classes(&self) -> SmallClassData {
        let n = self.n;
        let mut class_of = vec![u32::MAX; n];
        let mut reps = Vec::new();
        let mut sizes = Vec::new();
        for i in 0..n as u32 {
            if class_of[i as usize] != u32::MAX {
                continue;
            }
            let k = reps.len() as u32;
            let mut size = 0;
            for g in 0..n as u32 {
                let y = self.mul(self.mul(g, i), self.inv[g as usize]);
                if class_of[y as usize] == u32::MAX {
                    class_of[y as usize] = k;
                    size += 1;
                }
            }
            reps.push(i);
            sizes.push(size);
        }
        let element_orders: Vec<u64> = reps.iter().map(|&r| self.element_order(r)).collect();
        let inverse_class: Vec<usize> = reps
            .iter()
            .map(|&r| class_of[self.inv[r as usize] as usize] as usize)
            .collect();
        SmallClassData {
            k: reps.len(),
            sizes,
            class_of,
            reps,
            element_orders,
            inverse_class,
        }
    }
}
