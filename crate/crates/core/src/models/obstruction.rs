use crate::error::{Error, Result};
use crate::gf2poly::{binom2, Poly};
use crate::models::{ModelAlgebra, ModelKind};

/// The two sides of the `BP -> MU` splitting obstruction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BpObstruction {
    /// `Q^8 b_1 + b_1^2 Q^4 b_1` in `H_*MU`.
    pub source: Poly,
    pub source_text: String,
    /// `Q^6 b_2`, which must equal `source`.
    pub q6_b2: Poly,
    /// `Q^8(ξ_1^2) + ξ_1^4 Q^4(ξ_1^2)` in `A_*`.
    pub image: Poly,
    pub image_text: String,
    pub source_matches_q6_b2: bool,
    pub nonzero_source: bool,
    pub zero_image: bool,
    /// Smallest `n` for which an `E_n` map must respect the operations used.
    pub en_threshold: u32,
}

impl BpObstruction {
    pub fn holds(&self) -> bool {
        self.source_matches_q6_b2 && self.nonzero_source && self.zero_image
    }

    pub fn summary(&self) -> String {
        format!(
            "source Q^8 b_1 + b_1^2 Q^4 b_1 = {} ({}); equals Q^6 b_2: {}; \
             image in A: {} ({}); no splitting of E_{} algebras BP -> MU: {}",
            self.source_text,
            if self.nonzero_source {
                "nonzero"
            } else {
                "zero"
            },
            self.source_matches_q6_b2,
            self.image_text,
            if self.zero_image { "zero" } else { "nonzero" },
            self.en_threshold,
            self.holds(),
        )
    }
}

/// Evaluates the obstruction with `H_*MU` truncated at `cap` (at least 10)
/// and `A_*` at its default cap.
pub fn bp_splitting_obstruction(cap: u32) -> Result<BpObstruction> {
    if cap < 10 {
        return Err(Error::CapTooSmall { needed: 10, cap });
    }
    let mu = ModelAlgebra::new(ModelKind::MU, cap)?;
    let b1 = mu.gen(1)?;
    let b2 = mu.gen(2)?;
    let b1_sq = b1.frobenius();
    let source = mu
        .apply_upper(8, &b1)?
        .add(&b1_sq.mul(&mu.apply_upper(4, &b1)?, None));
    let q6_b2 = mu.apply_upper(6, &b2)?;

    let a = ModelAlgebra::with_default_cap(ModelKind::A)?;
    let xi1_sq = a.gen(1)?.frobenius();
    let image = a
        .apply_upper(8, &xi1_sq)?
        .add(&xi1_sq.frobenius().mul(&a.apply_upper(4, &xi1_sq)?, None));

    Ok(BpObstruction {
        source_text: mu.format(&source),
        image_text: a.format(&image),
        source_matches_q6_b2: source == q6_b2,
        nonzero_source: !source.is_zero(),
        zero_image: image.is_zero(),
        // Q^8 on a degree-2 class is Q_6, defined for E_7 algebras.
        en_threshold: 7,
        source,
        q6_b2,
        image,
    })
}

/// Coefficient of `η` in the cup-1 square of the integer `n`.
pub fn cup_one_int(n: i64) -> bool {
    binom2(n, 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn obstruction_holds() {
        let r = bp_splitting_obstruction(12).unwrap();
        assert!(r.holds(), "{}", r.summary());
        assert_eq!(r.source_text, "b_1 b_2^2 + b_1 b_4 + b_2 b_3 + b_5");
        assert!(bp_splitting_obstruction(9).is_err());
    }

    #[test]
    fn cup_one_values() {
        assert!(cup_one_int(2));
        assert!(cup_one_int(3));
        assert!(!cup_one_int(4));
        assert!(!cup_one_int(1));
        assert!(cup_one_int(-1));
    }
}
