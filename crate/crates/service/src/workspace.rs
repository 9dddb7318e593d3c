// Copyright 2026 The qsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Datasets persisted as `<table>.csv` files in a directory.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use qsim_core::catalog::normalize_identifier;
use qsim_core::{Catalog, CatalogError, KernelProfile};

#[derive(Debug, Clone)]
pub struct Workspace {
    dir: PathBuf,
}

#[derive(Debug)]
pub struct Skipped {
    pub file: PathBuf,
    pub reason: String,
}

impl Workspace {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Workspace { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path_for(&self, table: &str) -> PathBuf {
        self.dir.join(format!("{table}.csv"))
    }

    /// Loads every `*.csv` in name order. Files that fail to load are
    /// reported and skipped rather than failing the whole workspace.
    pub fn load(&self, profile: &KernelProfile) -> io::Result<(Catalog, Vec<Skipped>)> {
        let mut catalog = Catalog::new();
        let mut skipped = Vec::new();
        if !self.dir.exists() {
            return Ok((catalog, skipped));
        }
        let mut files: Vec<PathBuf> = fs::read_dir(&self.dir)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|e| e == "csv"))
            .collect();
        files.sort();
        for file in files {
            let stem = file.file_stem().and_then(|s| s.to_str()).unwrap_or_default().to_string();
            let result = fs::read_to_string(&file)
                .map_err(|e| e.to_string())
                .and_then(|text| catalog.load_csv(&stem, &text, profile).map_err(|e| e.to_string()));
            if let Err(reason) = result {
                skipped.push(Skipped { file, reason });
            }
        }
        Ok((catalog, skipped))
    }

    pub fn save(&self, table: &str, csv_text: &str) -> io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        fs::write(self.path_for(table), csv_text)
    }

    pub fn remove(&self, table: &str) -> io::Result<()> {
        match fs::remove_file(self.path_for(table)) {
            Err(e) if e.kind() != io::ErrorKind::NotFound => Err(e),
            _ => Ok(()),
        }
    }
}

/// Validates `csv_text` against `catalog` and `profile`, then adds it under
/// `name`. Returns the normalized table name.
pub fn add_dataset(
    catalog: &mut Catalog,
    name: &str,
    csv_text: &str,
    profile: &KernelProfile,
) -> Result<String, CatalogError> {
    let key = normalize_identifier(name)?;
    catalog.load_csv(&key, csv_text, profile)?;
    Ok(key)
}
