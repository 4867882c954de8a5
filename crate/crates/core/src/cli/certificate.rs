//! Certificate bundle and its JSON form. Every number is written as an exact
//! rational string so a third party can re-check the certificate.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::exact_arith::{format_rational, Rational};
use crate::farfield::FarFieldCertificate;
use crate::geometry::Point2;
use crate::gridcert::{GridCertificate, IntPoint};
use crate::instance::{Instance, Weights};
use crate::ordering::Classification;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug)]
pub struct CertificateBundle {
    /// Instance as read from the file.
    pub instance: Instance,
    pub weights: Weights,
    /// Translation applied to centre both families at the origin.
    pub translation: Point2,
    pub precision_denominator: BigInt,
    pub farfield: FarFieldCertificate,
    pub scale: BigInt,
    pub grid: GridCertificate,
    pub classification: Option<Classification>,
}

impl CertificateBundle {
    /// The grid disk must reach the far-field radius.
    pub fn coverage_ok(&self) -> bool {
        self.grid.covered_radius(&self.scale) >= self.farfield.rho
    }

    pub fn is_valid(&self) -> bool {
        self.farfield.psd && self.grid.margin_ok && self.coverage_ok()
    }

    pub fn to_file(&self) -> CertificateFile {
        let point = |p: &Point2| [format_rational(&p.x), format_rational(&p.y)];
        let int_point = |p: &IntPoint| [p.x.to_string(), p.y.to_string()];
        let ff = &self.farfield;
        CertificateFile {
            format_version: FORMAT_VERSION,
            instance: InstanceEcho {
                primary: self.instance.primaries().iter().map(point).collect(),
                secondary: self.instance.secondaries().iter().map(point).collect(),
                weights: [
                    format_rational(&self.weights.primary),
                    format_rational(&self.weights.secondary),
                ],
                translation: point(&self.translation),
            },
            farfield: FarFieldEcho::from_certificate(ff, &self.precision_denominator),
            grid: GridEcho {
                scale: self.scale.to_string(),
                half_width: self.grid.half_width.to_string(),
                min_value: self.grid.min_value.to_string(),
                argmin: int_point(&self.grid.argmin),
                lipschitz: self.grid.lipschitz.to_string(),
                margin_ok: self.grid.margin_ok,
                covered_radius: format_rational(&self.grid.covered_radius(&self.scale)),
                coverage_ok: self.coverage_ok(),
            },
            classification: self
                .classification
                .as_ref()
                .map(|table| ClassificationEcho {
                    certified: table.certified,
                    protrusive_orderings: table
                        .rows
                        .iter()
                        .filter(|r| r.protrusive)
                        .map(|r| OrderingEcho {
                            ordering: r.ordering.to_string(),
                            excluded: r.excluded,
                        })
                        .collect(),
                }),
            overall: if self.is_valid() { "VALID" } else { "INVALID" }.to_string(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_file()).expect("certificate serializes");
        s.push('\n');
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateFile {
    pub format_version: u32,
    pub instance: InstanceEcho,
    pub farfield: FarFieldEcho,
    pub grid: GridEcho,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub classification: Option<ClassificationEcho>,
    pub overall: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceEcho {
    pub primary: Vec<[String; 2]>,
    pub secondary: Vec<[String; 2]>,
    pub weights: [String; 2],
    pub translation: [String; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadFormEcho {
    pub a: String,
    pub b: String,
    pub c: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FarFieldEcho {
    pub alpha: String,
    /// `q(x, y) = a·x² + 2b·xy + c·y²`
    pub form: QuadFormEcho,
    pub psd: bool,
    pub r_hat: String,
    pub rp_hat: String,
    pub rho: String,
    pub precision_denominator: String,
}

impl FarFieldEcho {
    pub fn from_certificate(ff: &FarFieldCertificate, precision_denominator: &BigInt) -> Self {
        let s = |x: &Rational| format_rational(x);
        FarFieldEcho {
            alpha: s(&ff.alpha),
            form: QuadFormEcho {
                a: s(&ff.form.a),
                b: s(&ff.form.b),
                c: s(&ff.form.c),
            },
            psd: ff.psd,
            r_hat: s(&ff.r_hat),
            rp_hat: s(&ff.rp_hat),
            rho: s(&ff.rho),
            precision_denominator: precision_denominator.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridEcho {
    pub scale: String,
    pub half_width: String,
    pub min_value: String,
    pub argmin: [String; 2],
    pub lipschitz: String,
    pub margin_ok: bool,
    pub covered_radius: String,
    pub coverage_ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationEcho {
    pub certified: bool,
    pub protrusive_orderings: Vec<OrderingEcho>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderingEcho {
    pub ordering: String,
    pub excluded: Option<bool>,
}
