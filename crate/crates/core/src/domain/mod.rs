//! Spherical domains as expressions over atoms and catalog shapes combined by
//! the join product.

mod parser;

use std::fmt;
use std::str::FromStr;

pub use parser::parse_domain;

use crate::error::{Error, Result};

/// Upper bound on the arc angle; an arc of angle 2π would be the full circle.
const FULL_TURN: f64 = std::f64::consts::TAU;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum BoundaryCondition {
    #[default]
    Dirichlet,
    Neumann,
}

impl BoundaryCondition {
    /// +1 for Dirichlet, -1 for Neumann; the sign carried by γ and -a₁.
    pub fn sign(self) -> f64 {
        match self {
            Self::Dirichlet => 1.0,
            Self::Neumann => -1.0,
        }
    }
}

impl fmt::Display for BoundaryCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Dirichlet => "dirichlet",
            Self::Neumann => "neumann",
        })
    }
}

impl FromStr for BoundaryCondition {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "dirichlet" | "d" => Ok(Self::Dirichlet),
            "neumann" | "n" => Ok(Self::Neumann),
            other => Err(format!("unknown boundary condition {other:?}")),
        }
    }
}

/// Catalog shapes. Constructed through [`NamedDomain::validated`] or the
/// parser, which enforce the parameter ranges.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NamedDomain {
    /// The full sphere S^{n-1}.
    Sphere { n: u32 },
    /// The all-right-angle polytope T^{n-1}, one orthant of S^{n-1}.
    T { n: u32 },
    HalfSphere { n: u32 },
    /// Circular arc on S¹ of opening angle φ.
    Arc { angle: f64 },
    /// T^{n-1} distorted so that facet normals meet at cos⁻¹ρ.
    RegularT { n: u32, rho: f64 },
    /// Geodesic ball of angular radius θ on S^{n-1}.
    Cap { n: u32, theta: f64 },
    /// Sector of a cap on S²: radius θ, opening angle φ.
    Sector { theta: f64, phi: f64 },
}

impl NamedDomain {
    pub fn validated(self) -> Result<Self> {
        let dim = |domain: &'static str, n: u32, min: u32| {
            if n < min {
                Err(Error::Dimension {
                    domain,
                    n: n as i64,
                    min,
                })
            } else {
                Ok(())
            }
        };
        let angle = |name: &'static str, v: f64, max: f64, reason: &'static str| {
            if v.is_finite() && v > 0.0 && v < max {
                Ok(())
            } else {
                Err(Error::InvalidParameter {
                    name,
                    value: v,
                    reason,
                })
            }
        };
        match self {
            Self::Sphere { n } => dim("Sphere", n, 1)?,
            Self::T { n } => dim("T", n, 1)?,
            Self::HalfSphere { n } => dim("HalfSphere", n, 1)?,
            Self::Arc { angle: a } => angle("angle", a, FULL_TURN, "must lie in (0, 2pi)")?,
            Self::RegularT { n, rho } => {
                dim("RegularT", n, 1)?;
                if !(rho.is_finite() && (0.0..1.0).contains(&rho)) {
                    return Err(Error::InvalidParameter {
                        name: "rho",
                        value: rho,
                        reason: "must lie in [0, 1)",
                    });
                }
            }
            Self::Cap { n, theta } => {
                dim("Cap", n, 2)?;
                angle("theta", theta, std::f64::consts::PI, "must lie in (0, pi)")?;
            }
            Self::Sector { theta, phi } => {
                angle("theta", theta, std::f64::consts::PI, "must lie in (0, pi)")?;
                angle("phi", phi, FULL_TURN, "must lie in (0, 2pi)")?;
            }
        }
        Ok(self)
    }

    pub fn ambient_dim(&self) -> u32 {
        match *self {
            Self::Sphere { n }
            | Self::T { n }
            | Self::HalfSphere { n }
            | Self::RegularT { n, .. }
            | Self::Cap { n, .. } => n,
            Self::Arc { .. } => 2,
            Self::Sector { .. } => 3,
        }
    }
}

/// A spherical domain. Joins are kept flat (no directly nested joins, at
/// least two members), which is the canonical form for an associative
/// product.
#[derive(Debug, Clone, PartialEq)]
pub enum DomainExpr {
    /// S⁰: the two points ±1.
    S0,
    /// T⁰: the single point +1.
    T0,
    Named(NamedDomain),
    Join(Vec<DomainExpr>),
}

impl DomainExpr {
    /// Join product, flattening nested joins.
    pub fn join(self, other: DomainExpr) -> DomainExpr {
        let mut members = Vec::new();
        for d in [self, other] {
            match d {
                DomainExpr::Join(inner) => members.extend(inner),
                leaf => members.push(leaf),
            }
        }
        DomainExpr::Join(members)
    }

    /// Join of a non-empty list; a single member is returned unwrapped.
    pub fn join_all(parts: impl IntoIterator<Item = DomainExpr>) -> DomainExpr {
        let mut iter = parts.into_iter();
        let first = iter.next().expect("join of an empty list");
        iter.fold(first, DomainExpr::join)
    }

    /// n, for a domain on S^{n-1}.
    pub fn ambient_dim(&self) -> u32 {
        match self {
            Self::S0 | Self::T0 => 1,
            Self::Named(d) => d.ambient_dim(),
            Self::Join(parts) => parts.iter().map(Self::ambient_dim).sum(),
        }
    }

    /// Rewrites catalog shapes that are joins of atoms into those joins.
    /// Irreducible shapes (caps, sectors, distorted T with n >= 3) are kept.
    pub fn expand_named(&self) -> DomainExpr {
        let repeat = |atom: DomainExpr, k: u32| {
            DomainExpr::join_all(std::iter::repeat_n(atom, k as usize))
        };
        match self {
            Self::S0 | Self::T0 => self.clone(),
            Self::Named(named) => match *named {
                NamedDomain::Sphere { n } => repeat(Self::S0, n),
                NamedDomain::T { n } => repeat(Self::T0, n),
                NamedDomain::HalfSphere { n: 1 } => Self::T0,
                NamedDomain::HalfSphere { n } => repeat(Self::S0, n - 1).join(Self::T0),
                NamedDomain::RegularT { n: 1, .. } => Self::T0,
                NamedDomain::RegularT { n: 2, rho } => Self::Named(NamedDomain::Arc {
                    angle: (-rho).acos(),
                }),
                NamedDomain::RegularT { n, rho } if rho == 0.0 => repeat(Self::T0, n),
                _ => self.clone(),
            },
            Self::Join(parts) => Self::join_all(parts.iter().map(Self::expand_named)),
        }
    }

    /// Members of the expanded join (a single leaf for non-joins).
    pub fn leaves(&self) -> Vec<DomainExpr> {
        match self.expand_named() {
            Self::Join(parts) => parts,
            leaf => vec![leaf],
        }
    }

    pub fn capabilities(&self) -> DomainCapabilities {
        let leaves = self.leaves();
        let spectrum_exact = leaves.iter().all(|leaf| {
            matches!(
                leaf,
                Self::S0 | Self::T0 | Self::Named(NamedDomain::Arc { .. })
            )
        });
        // curved boundaries only have known geometry standalone
        let geometry_known = leaves.len() == 1
            || leaves.iter().all(|leaf| {
                !matches!(
                    leaf,
                    Self::Named(NamedDomain::Cap { .. } | NamedDomain::Sector { .. })
                )
            });
        DomainCapabilities {
            ambient_dim: self.ambient_dim(),
            spectrum_exact,
            geometry_known,
        }
    }
}

impl From<NamedDomain> for DomainExpr {
    fn from(d: NamedDomain) -> Self {
        DomainExpr::Named(d)
    }
}

impl FromStr for DomainExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_domain(s)
    }
}

impl fmt::Display for NamedDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // `{}` on f64 prints the shortest string that parses back exactly
        match *self {
            Self::Sphere { n } => write!(f, "Sphere({n})"),
            Self::T { n } => write!(f, "T({n})"),
            Self::HalfSphere { n } => write!(f, "HalfSphere({n})"),
            Self::Arc { angle } => write!(f, "Arc(angle={angle})"),
            Self::RegularT { n, rho } => write!(f, "RegularT({n}, rho={rho})"),
            Self::Cap { n: 3, theta } => write!(f, "Cap(theta={theta})"),
            Self::Cap { n, theta } => write!(f, "Cap({n}, theta={theta})"),
            Self::Sector { theta, phi } => write!(f, "Sector(theta={theta}, phi={phi})"),
        }
    }
}

impl fmt::Display for DomainExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::S0 => f.write_str("S0"),
            Self::T0 => f.write_str("T0"),
            Self::Named(d) => d.fmt(f),
            Self::Join(parts) => {
                for (i, part) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" * ")?;
                    }
                    part.fmt(f)?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DomainCapabilities {
    pub ambient_dim: u32,
    /// M(z) is available in closed form.
    pub spectrum_exact: bool,
    /// Area, boundary and corner data are available.
    pub geometry_known: bool,
}
