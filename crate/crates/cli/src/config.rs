use serde::{Deserialize, Serialize};

/// Parameter grid for the verification suites.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grid {
    /// Rank range for the strata tables.
    pub strata_n: (usize, usize),
    /// Primes for the weight ledger and strata tables.
    pub ledger_primes: Vec<u64>,
    /// Largest rank for the classification of random conjugates.
    pub classify_n_max: usize,
    /// Fields `(p, k)` for classification.
    pub classify_fields: Vec<(u64, u32)>,
    pub conjugates: usize,
    /// Fields `(p, k)` for the adjugate identity.
    pub adjugate_fields: Vec<(u64, u32)>,
    pub adjugate_trials: usize,
    pub adjugate_max_size: usize,
    /// Primes for the theta suites.
    pub theta_primes: Vec<u64>,
    pub theta_n_max: usize,
    pub trunc: usize,
    /// Largest section degree for the Leibniz pairs.
    pub leibniz_degree: usize,
    pub projection_n_max: usize,
    pub projection_weight_max: i64,
    pub filtration_rank_max: usize,
    pub filtration_j_max: usize,
    pub torsion_n_max: usize,
    /// Run the perturbed-V model through the Frobenius-kill check.
    pub negative_control: bool,
}

impl Default for Grid {
    fn default() -> Self {
        Grid {
            strata_n: (3, 8),
            ledger_primes: vec![2, 3, 5, 7],
            classify_n_max: 4,
            classify_fields: vec![(2, 1), (3, 1), (5, 1)],
            conjugates: 200,
            adjugate_fields: vec![(2, 1), (3, 1), (5, 1), (7, 1), (2, 2), (3, 2), (5, 2)],
            adjugate_trials: 500,
            adjugate_max_size: 6,
            theta_primes: vec![2, 3, 5],
            theta_n_max: 4,
            trunc: 3,
            leibniz_degree: 2,
            projection_n_max: 5,
            projection_weight_max: 3,
            filtration_rank_max: 6,
            filtration_j_max: 4,
            torsion_n_max: 6,
            negative_control: true,
        }
    }
}

impl Grid {
    /// Adds the degree-`k` extension of every prime already in the field lists.
    pub fn with_ext_degree(mut self, k: u32) -> Self {
        if k <= 1 {
            return self;
        }
        for list in [&mut self.classify_fields, &mut self.adjugate_fields] {
            let primes: Vec<u64> = list.iter().filter(|f| f.1 == 1).map(|f| f.0).collect();
            for p in primes {
                if p.checked_pow(k).is_some_and(|q| q <= 1 << 12) && !list.contains(&(p, k)) {
                    list.push((p, k));
                }
            }
        }
        self
    }
}
