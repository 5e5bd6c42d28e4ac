use std::fmt;

use crate::exact::Poly;

/// Class `f^{[i]}` in the associated graded algebra, represented by the
/// weighted-homogeneous part of degree exactly `i` (possibly zero).
#[derive(Debug, Clone, PartialEq)]
pub struct GrClass {
    degree: i64,
    rep: Poly,
}

impl GrClass {
    pub(crate) fn new_unchecked(degree: i64, rep: Poly) -> GrClass {
        GrClass { degree, rep }
    }

    /// Builds a class, checking that `rep` is homogeneous of degree `degree`.
    pub fn new(chart: &super::WeightedChart, degree: i64, rep: Poly) -> crate::Result<GrClass> {
        if !chart.grading().is_homogeneous(&rep, degree)? {
            return Err(crate::Error::Precondition(format!(
                "representative is not homogeneous of degree {degree}"
            )));
        }
        Ok(GrClass { degree, rep })
    }

    /// Zero class at level `degree`, over the variables of `vars`.
    pub fn zero(degree: i64, vars: &Poly) -> GrClass {
        GrClass {
            degree,
            rep: Poly::zero_in(vars.vars().clone()),
        }
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn rep(&self) -> &Poly {
        &self.rep
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }
}

/// Product in the associated graded algebra: degrees add and
/// representatives multiply. Over an integral domain the product of leading
/// parts is the leading part of the product.
pub fn gr_mul(a: &GrClass, b: &GrClass) -> GrClass {
    GrClass {
        degree: a.degree + b.degree,
        rep: &a.rep * &b.rep,
    }
}

impl fmt::Display for GrClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})^[{}]", self.rep, self.degree)
    }
}
