//! Tensor slots and jet words.

use std::fmt;

use smallvec::SmallVec;

/// Index label. Free labels are chosen by the caller (the parser maps index
/// names onto them); dummy labels are owned by a monomial and renumbered by
/// canonicalization.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Label {
    Free(u8),
    Dummy(u8),
}

impl Label {
    pub fn is_dummy(self) -> bool {
        matches!(self, Label::Dummy(_))
    }
}

/// Reserved free labels for builder-internal contractions. Never produced by
/// the parser.
pub const SCRATCH_BASE: u8 = 200;

/// Text name of a free label: `a`..`z`, then `a1`..`z1`, and so on.
pub fn free_name(id: u8) -> String {
    let letter = char::from(b'a' + id % 26);
    match id / 26 {
        0 => letter.to_string(),
        k => format!("{letter}{k}"),
    }
}

/// Inverse of [`free_name`].
pub fn free_id(name: &str) -> Option<u8> {
    let mut chars = name.chars();
    let c = chars.next()?;
    if !c.is_ascii_lowercase() {
        return None;
    }
    let rest = chars.as_str();
    let k: u32 = if rest.is_empty() {
        0
    } else if rest.starts_with('0') || !rest.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    } else {
        rest.parse().ok()?
    };
    let id = k.checked_mul(26)?.checked_add(u32::from(c as u8 - b'a'))?;
    u8::try_from(id).ok()
}

/// Diagnostic spelling of one slot, e.g. `b'`.
pub fn index_name(i: Index) -> String {
    let name = |l: Label| match l {
        Label::Free(id) => free_name(id),
        Label::Dummy(k) => format!("#{k}"),
    };
    match i {
        Index::Hol(l) => name(l),
        Index::Anti(l) => format!("{}'", name(l)),
        Index::T => "0".to_string(),
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Kind {
    Hol,
    Anti,
    T,
}

/// One derivative slot: `Z_α`, `Z_ᾱ` or `∂/∂t`.
///
/// The derived order (holomorphic < antiholomorphic < transverse, then label)
/// is the canonical order inside a normalized jet word.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Index {
    Hol(Label),
    Anti(Label),
    T,
}

impl Index {
    pub fn kind(self) -> Kind {
        match self {
            Index::Hol(_) => Kind::Hol,
            Index::Anti(_) => Kind::Anti,
            Index::T => Kind::T,
        }
    }

    pub fn label(self) -> Option<Label> {
        match self {
            Index::Hol(l) | Index::Anti(l) => Some(l),
            Index::T => None,
        }
    }

    pub fn conj(self) -> Index {
        match self {
            Index::Hol(l) => Index::Anti(l),
            Index::Anti(l) => Index::Hol(l),
            Index::T => Index::T,
        }
    }

    pub fn with_label(self, l: Label) -> Index {
        match self {
            Index::Hol(_) => Index::Hol(l),
            Index::Anti(_) => Index::Anti(l),
            Index::T => Index::T,
        }
    }

    pub fn free_hol(id: u8) -> Index {
        Index::Hol(Label::Free(id))
    }

    pub fn free_anti(id: u8) -> Index {
        Index::Anti(Label::Free(id))
    }
}

pub type Word = SmallVec<[Index; 6]>;

/// A derivative `f_w` of the unknown, `w` read left to right as the order in
/// which the vector fields are applied (`f_{αβ̄} = Z_β̄ Z_α f`).
///
/// Stored in block form: transverse slots moved to the end (∂/∂t is central),
/// and every maximal run of holomorphic (resp. antiholomorphic) slots sorted,
/// since those fields commute among themselves. Two words denote the same
/// derivative for every `f` iff their block forms coincide.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Jet(Word);

impl Jet {
    pub fn new(indices: impl IntoIterator<Item = Index>) -> Jet {
        let mut j = Jet(indices.into_iter().collect());
        j.canonicalize();
        j
    }

    pub fn indices(&self) -> &[Index] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Restores block form after labels were rewritten in place.
    pub fn canonicalize(&mut self) {
        let w = &mut self.0;
        let t_count = w.iter().filter(|i| **i == Index::T).count();
        if t_count > 0 {
            w.retain(|i| *i != Index::T);
        }
        let mut start = 0;
        while start < w.len() {
            let k = w[start].kind();
            let mut end = start + 1;
            while end < w.len() && w[end].kind() == k {
                end += 1;
            }
            w[start..end].sort_unstable();
            start = end;
        }
        w.extend(std::iter::repeat_n(Index::T, t_count));
    }

    pub fn appended(&self, idx: Index) -> Jet {
        let mut w = self.0.clone();
        w.push(idx);
        Jet::new(w)
    }

    pub fn conj(&self) -> Jet {
        Jet::new(self.0.iter().map(|i| i.conj()))
    }

    /// Number of non-transverse slots.
    pub fn z_order(&self) -> usize {
        self.0.iter().filter(|i| **i != Index::T).count()
    }

    /// Fully ordered: all holomorphic, then antiholomorphic, then transverse.
    pub fn is_sorted(&self) -> bool {
        !self.0.windows(2).any(|p| p[0].kind() == Kind::Anti && p[1].kind() == Kind::Hol)
    }

    /// Count of (antiholomorphic, holomorphic) out-of-order pairs.
    pub fn inversions(&self) -> usize {
        let mut anti_seen = 0;
        let mut inv = 0;
        for i in &self.0 {
            match i.kind() {
                Kind::Anti => anti_seen += 1,
                Kind::Hol => inv += anti_seen,
                Kind::T => {}
            }
        }
        inv
    }

    /// Label contracted within this single word (appears as both kinds).
    pub fn self_trace(&self) -> Option<Label> {
        self.self_traces().next()
    }

    pub fn self_traces(&self) -> impl Iterator<Item = Label> + '_ {
        self.0.iter().filter_map(move |i| match i {
            Index::Hol(l) if self.0.contains(&Index::Anti(*l)) => Some(*l),
            _ => None,
        })
    }
}

impl fmt::Display for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.0.iter().map(|i| index_name(*i)).collect();
        write!(f, "f[{}]", names.join(","))
    }
}

/// Kronecker delta `δ_{hol, anti}`. Only ever stored between two free labels;
/// any contraction eliminates it.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Delta {
    pub hol: Label,
    pub anti: Label,
}

impl Delta {
    pub fn conj(self) -> Delta {
        Delta { hol: self.anti, anti: self.hol }
    }
}
