//! JSON document shared by the library and the command line.
//!
//! ```json
//! { "format": "nqscps-model", "version": 1, "kind": "nqs",
//!   "n_sites": 2, "layer1": [ ... ], "source": { "builder": "graph" } }
//! ```

use serde::{Deserialize, Serialize};

use crate::amplitude::AmplitudeSource;
use crate::config::Config;
use crate::cps::CpsModel;
use crate::error::{Error, Result};
use crate::nqs::{NqsModel, RbmParams};
use crate::scaled::ScaledComplex;

pub const MODEL_FORMAT: &str = "nqscps-model";
pub const MODEL_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Model {
    Nqs(NqsModel),
    Cps(CpsModel),
    Rbm(RbmParams),
}

impl Model {
    pub fn validate(&self) -> Result<()> {
        match self {
            Model::Nqs(m) => m.validate(),
            Model::Cps(m) => m.validate(),
            Model::Rbm(p) => RbmParams::new(p.a.clone(), p.b.clone(), p.w.clone()).map(|_| ()),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Model::Nqs(_) => "nqs",
            Model::Cps(_) => "cps",
            Model::Rbm(_) => "rbm",
        }
    }

    /// Hidden-unit dimensions of layer 1 (empty for CPS models).
    pub fn unit_dims(&self) -> Vec<usize> {
        match self {
            Model::Nqs(m) => m.layer1().iter().map(|u| u.dim()).collect(),
            Model::Cps(_) => vec![],
            Model::Rbm(p) => vec![2; p.n_hidden()],
        }
    }
}

impl AmplitudeSource for Model {
    fn n_sites(&self) -> usize {
        match self {
            Model::Nqs(m) => m.n_sites(),
            Model::Cps(m) => m.n_sites(),
            Model::Rbm(p) => p.n_visible(),
        }
    }
    fn amplitude(&self, v: &Config) -> ScaledComplex {
        match self {
            Model::Nqs(m) => m.amplitude(v),
            Model::Cps(m) => m.amplitude(v),
            Model::Rbm(p) => p.amplitude(v),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelDocument {
    pub format: String,
    pub version: u32,
    #[serde(flatten)]
    pub model: Model,
    /// Free-form record of how the model was made.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<serde_json::Value>,
}

impl ModelDocument {
    pub fn new(model: Model, source: Option<serde_json::Value>) -> Self {
        Self {
            format: MODEL_FORMAT.into(),
            version: MODEL_VERSION,
            model,
            source,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ModelDocument = serde_json::from_str(text)?;
        if doc.format != MODEL_FORMAT {
            return Err(Error::Format(format!("expected format \"{MODEL_FORMAT}\", found \"{}\"", doc.format)));
        }
        if doc.version != MODEL_VERSION {
            return Err(Error::Format(format!("unsupported version {}", doc.version)));
        }
        doc.model.validate()?;
        Ok(doc)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}
