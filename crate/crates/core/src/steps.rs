/// Operation tally for one exponentiation run. A "step" in cost analyses is
/// a modular multiplication; divisions by the prime-power part and extended
/// Euclid inversions are tracked separately.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StepCount {
    pub multiplications: u64,
    pub divisions: u64,
    pub inversions: u64,
}

impl StepCount {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, other: &StepCount) {
        self.multiplications += other.multiplications;
        self.divisions += other.divisions;
        self.inversions += other.inversions;
    }
}

impl std::fmt::Display for StepCount {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "mul={} div={} inv={}",
            self.multiplications, self.divisions, self.inversions
        )
    }
}
