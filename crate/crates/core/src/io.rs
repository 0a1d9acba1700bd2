//! JSON file formats for groups and virtual endomorphisms.
//!
//! Group file: `{ "name", "degree", "generators": [[cycle, …], …], "prime"? }`
//! with 0-based cycles and fixed points omitted.
//!
//! Endomorphism file: `{ "group", "H_gens": [ids], "images": [ids] }` where
//! `group` is a catalog name or a path to a group file (relative to the
//! endomorphism file), and ids use the group's BFS numbering.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::catalog;
use crate::error::{Error, Result};
use crate::group::{GroupTable, Perm};
use crate::morphism::VirtualEndomorphism;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupFile {
    pub name: String,
    pub degree: usize,
    pub generators: Vec<Vec<Vec<u32>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prime: Option<u32>,
}

impl GroupFile {
    pub fn from_table(g: &GroupTable) -> Self {
        GroupFile {
            name: g.name().unwrap_or("group").to_owned(),
            degree: g.degree(),
            generators: g.gen_ids().iter().map(|&x| g.perm(x).cycles()).collect(),
            prime: g.prime_hint(),
        }
    }

    /// Validates every generator and closes them.
    pub fn build(&self, cap: usize) -> Result<GroupTable> {
        let gens = self
            .generators
            .iter()
            .enumerate()
            .map(|(k, cycles)| {
                Perm::from_cycles(self.degree, cycles)
                    .map_err(|e| Error::input(format!("generator {k}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let g = GroupTable::from_generators(self.degree, &gens, cap)?.with_name(self.name.clone());
        match self.prime {
            Some(p) => g.with_prime(p),
            None => Ok(g),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("group file serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EndoFile {
    pub group: String,
    #[serde(rename = "H_gens")]
    pub h_gens: Vec<u32>,
    pub images: Vec<u32>,
}

impl EndoFile {
    pub fn from_endo(group_ref: &str, endo: &VirtualEndomorphism) -> Self {
        EndoFile {
            group: group_ref.to_owned(),
            h_gens: endo.f().gens().to_vec(),
            images: endo.f().gen_images().to_vec(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("endo file serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Builds the endomorphism on `group`; fails if the map does not extend.
    pub fn resolve_on(&self, group: Arc<GroupTable>, p: u32) -> Result<VirtualEndomorphism> {
        VirtualEndomorphism::from_map(group, p, &self.h_gens, &self.images)?
            .ok_or_else(|| Error::input("the generator images do not extend to a homomorphism"))
    }
}

/// A catalog name, or a path to a group file.
pub fn load_group(reference: &str, cap: usize) -> Result<GroupTable> {
    load_group_relative(reference, None, cap)
}

fn load_group_relative(reference: &str, base: Option<&Path>, cap: usize) -> Result<GroupTable> {
    if let Some(entry) = catalog::lookup(reference) {
        return entry.build_with_cap(cap);
    }
    let path = match base {
        Some(dir) if Path::new(reference).is_relative() => dir.join(reference),
        _ => PathBuf::from(reference),
    };
    if !path.exists() {
        return Err(Error::input(format!(
            "{reference:?} is neither a catalog name nor an existing file"
        )));
    }
    GroupFile::from_json(&std::fs::read_to_string(&path)?)?.build(cap)
}

/// Reads an endomorphism file and the group it refers to.
pub fn load_endo_file(path: &Path, cap: usize) -> Result<(EndoFile, GroupTable)> {
    let file = EndoFile::from_json(&std::fs::read_to_string(path)?)?;
    let group = load_group_relative(&file.group, path.parent(), cap)?;
    Ok((file, group))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn export_then_load_gives_the_same_numbering() {
        let g = catalog::lookup("heisenberg3").unwrap().build().unwrap();
        let file = GroupFile::from_table(&g);
        let back = GroupFile::from_json(&file.to_json()).unwrap().build(1000).unwrap();
        assert_eq!(back.fingerprint(), g.fingerprint());
        assert_eq!(back.prime_hint(), Some(3));
    }

    #[test]
    fn loader_rejects_non_bijections() {
        let text = r#"{"name":"bad","degree":3,"generators":[[[0,1],[1,2]]]}"#;
        let err = GroupFile::from_json(text).unwrap().build(10).unwrap_err();
        assert!(err.to_string().contains("generator 0"));
        let text = r#"{"name":"bad","degree":2,"generators":[[[0,5]]]}"#;
        assert!(GroupFile::from_json(text).unwrap().build(10).is_err());
    }

    #[test]
    fn wrong_prime_is_rejected() {
        let text = r#"{"name":"c3","degree":3,"generators":[[[0,1,2]]],"prime":2}"#;
        assert!(matches!(
            GroupFile::from_json(text).unwrap().build(10),
            Err(Error::NotAPGroup { .. })
        ));
    }
}
