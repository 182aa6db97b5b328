//! Exact single-particle solution of the integrable drive (all h_j = 0).

pub mod correlator;
pub mod edge;
pub mod floquet;
pub mod pfaffian;
pub mod splitting;

pub use correlator::{heisenberg_correlator, majorana_autocorrelator, GaussianBitstring};
pub use edge::{
    bulk_band, bulk_dispersion, edge_eigenvalue, edge_wavefunction, localization_length, reflect_majorana,
    transfer_matrix, EdgeEigenvalue, EdgeTheory, MajoranaMode, ModeSector, Sector, Side,
};
pub use floquet::{apply_r, apply_rt, RotationPlane, SingleParticleFloquet};
pub use pfaffian::pfaffian;
pub use splitting::{hybridization_splitting, splitting_of};
