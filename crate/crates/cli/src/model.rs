use std::path::Path;

use vqpe_core::hamiltonian::ReferenceKind;
use vqpe_core::{
    build_linear_spectrum, build_tfim, load_hamiltonian, Result, Spectrum, StateVector, VqpeError,
};

/// Reference-state flag syntax: `basis:<k>`, `boltzmann:<beta>`, or
/// `product:<a>,<b>`.
pub fn parse_reference(s: &str) -> Result<ReferenceKind> {
    let (kind, rest) = s.split_once(':').unwrap_or((s, ""));
    match kind {
        "basis" => Ok(ReferenceKind::BasisIndex(rest.parse().map_err(|e| {
            VqpeError::InvalidArgument(format!("basis index '{rest}': {e}"))
        })?)),
        "boltzmann" => Ok(ReferenceKind::Boltzmann {
            beta: rest.parse().map_err(|e| {
                VqpeError::InvalidArgument(format!("boltzmann beta '{rest}': {e}"))
            })?,
        }),
        "product" => {
            let (a, b) = rest.split_once(',').ok_or_else(|| {
                VqpeError::InvalidArgument("product reference needs 'product:a,b'".into())
            })?;
            Ok(ReferenceKind::Product {
                a: a.trim().parse().map_err(|e| {
                    VqpeError::InvalidArgument(format!("product amplitude '{a}': {e}"))
                })?,
                b: b.trim().parse().map_err(|e| {
                    VqpeError::InvalidArgument(format!("product amplitude '{b}': {e}"))
                })?,
            })
        }
        other => Err(VqpeError::InvalidArgument(format!(
            "unknown reference kind '{other}' (expected basis:<k>, boltzmann:<beta>, product:<a>,<b>)"
        ))),
    }
}

/// A fully prepared model system: its spectrum and the realized reference.
pub struct System {
    pub spectrum: Spectrum,
    pub reference: StateVector,
}

pub enum SystemSource<'a> {
    HamiltonianFile(&'a Path),
    Harmonic { delta_e: f64, dimension: usize },
    Tfim { n_sites: usize, j: f64, h: f64 },
}

pub fn build_system(source: SystemSource<'_>, reference: ReferenceKind) -> Result<System> {
    let spectrum = match source {
        SystemSource::HamiltonianFile(path) => load_hamiltonian(path)?.spectrum()?,
        SystemSource::Harmonic { delta_e, dimension } => {
            build_linear_spectrum(delta_e, dimension)?.spectrum()
        }
        SystemSource::Tfim { n_sites, j, h } => {
            vqpe_core::diagonalize(&build_tfim(n_sites, j, h)?.to_dense()?)?
        }
    };
    let reference = reference.realize(&spectrum)?;
    Ok(System {
        spectrum,
        reference,
    })
}
