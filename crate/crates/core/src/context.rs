//! Lazily built objects attached to the lattice `N` that several suites share.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use crate::arith::CMatrix;
use crate::fixtures;
use crate::fqm::{ElementType, FqmAutomorphism, FqmElement};
use crate::lattice::{lattice_n, DiscriminantForm, Lattice};
use crate::weil::{self, CharacterTable, GroupRingVector, ImageGroup, NamedClasses, WeilRepresentation};
use crate::{Error, Result};

/// Closure limit for the image of `SL(2, Z)`.
pub const IMAGE_LIMIT: usize = 96;
/// Node budget for the orthogonal-group search.
pub const ORTHOGONAL_BUDGET: u64 = 2_000_000;

/// Index of `chi_4` and `chi_3` in the character table.
const CHI_W: usize = 3;
const CHI_W0: usize = 2;

pub struct NContext {
    pub lattice: Lattice,
    pub disc: DiscriminantForm,
    pub signature: (usize, usize),
    pub kappa: FqmElement,
    pub weil: WeilRepresentation,
    group: OnceLock<Result<ImageGroup>>,
    classes: OnceLock<Result<NamedClasses>>,
    table: OnceLock<Result<CharacterTable>>,
    w: OnceLock<Result<(CMatrix, Vec<GroupRingVector>)>>,
    w0: OnceLock<Result<(CMatrix, Vec<GroupRingVector>)>>,
    planes: OnceLock<Vec<[FqmElement; 3]>>,
    thetas: OnceLock<Result<Vec<GroupRingVector>>>,
    orthogonal: OnceLock<Result<Vec<FqmAutomorphism>>>,
}

fn cached<T>(cell: &OnceLock<Result<T>>, f: impl FnOnce() -> Result<T>) -> Result<&T> {
    cell.get_or_init(f).as_ref().map_err(Error::clone)
}

impl NContext {
    pub fn new() -> Result<Self> {
        let lattice = lattice_n();
        let disc = lattice.discriminant_module()?;
        let signature = lattice.signature()?;
        let kappa = disc.module.radical_kappa()?;
        let weil = WeilRepresentation::new(&disc.module, signature)?;
        Ok(NContext {
            lattice,
            disc,
            signature,
            kappa,
            weil,
            group: OnceLock::new(),
            classes: OnceLock::new(),
            table: OnceLock::new(),
            w: OnceLock::new(),
            w0: OnceLock::new(),
            planes: OnceLock::new(),
            thetas: OnceLock::new(),
            orthogonal: OnceLock::new(),
        })
    }

    /// A process-wide instance.
    pub fn shared() -> Result<&'static NContext> {
        static SHARED: OnceLock<Result<NContext>> = OnceLock::new();
        cached(&SHARED, NContext::new)
    }

    pub fn module(&self) -> &crate::fqm::FiniteQuadraticModule {
        &self.disc.module
    }

    pub fn partition(&self) -> BTreeMap<ElementType, Vec<FqmElement>> {
        self.module().partition(&self.kappa)
    }

    pub fn group(&self) -> Result<&ImageGroup> {
        cached(&self.group, || self.weil.image_group(IMAGE_LIMIT))
    }

    pub fn classes(&self) -> Result<&NamedClasses> {
        cached(&self.classes, || self.group()?.named_classes())
    }

    /// The transcribed character table, with class sizes taken from the image group.
    pub fn character_table(&self) -> Result<&CharacterTable> {
        cached(&self.table, || {
            CharacterTable::new(
                fixtures::CLASS_NAMES.iter().map(|s| s.to_string()).collect(),
                fixtures::character_values(),
                self.classes()?.sizes.clone(),
            )
        })
    }

    fn isotypic(&self, chi: usize, dim: usize) -> Result<(CMatrix, Vec<GroupRingVector>)> {
        let table = self.character_table()?;
        weil::isotypic_subspace(self.module(), self.group()?, self.classes()?, &table.values[chi], dim)
    }

    /// Projection onto `W` and a basis of it.
    pub fn w(&self) -> Result<&(CMatrix, Vec<GroupRingVector>)> {
        cached(&self.w, || self.isotypic(CHI_W, 5))
    }

    /// Projection onto `W_0` and its generator.
    pub fn w0(&self) -> Result<&(CMatrix, Vec<GroupRingVector>)> {
        cached(&self.w0, || self.isotypic(CHI_W0, 1))
    }

    pub fn planes(&self) -> &[[FqmElement; 3]] {
        self.planes.get_or_init(|| self.module().isotropic_planes())
    }

    /// `theta_V` for every plane, in plane order.
    pub fn thetas(&self) -> Result<&Vec<GroupRingVector>> {
        cached(&self.thetas, || {
            self.planes()
                .iter()
                .map(|p| weil::theta_v(self.module(), p, &self.kappa))
                .collect()
        })
    }

    pub fn orthogonal_group(&self) -> Result<&Vec<FqmAutomorphism>> {
        cached(&self.orthogonal, || self.module().orthogonal_group(ORTHOGONAL_BUDGET))
    }
}
