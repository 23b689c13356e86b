//! The nine augmentation methods compared by the harness and the GAN setup
//! behind each one.

use std::fmt;
use std::str::FromStr;

use rgan_core::gan::{GanConfig, LossKind, Restraint};
use rgan_core::restraint::RestraintState;
use rgan_core::topology::TopologyPattern;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Original,
    Smote,
    Gan,
    Wgan,
    Awgan,
    Swgan,
    Aswgan,
    Iwgan,
    WganStar,
}

/// How a method relates to the restraint idea, used when ranking.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Baseline,
    Unrestrained,
    Static,
    Dynamic,
}

impl Method {
    pub const ALL: [Method; 9] = [
        Method::Original,
        Method::Smote,
        Method::Gan,
        Method::Wgan,
        Method::Awgan,
        Method::Swgan,
        Method::Aswgan,
        Method::Iwgan,
        Method::WganStar,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Original => "original",
            Method::Smote => "smote",
            Method::Gan => "gan",
            Method::Wgan => "wgan",
            Method::Awgan => "awgan",
            Method::Swgan => "swgan",
            Method::Aswgan => "aswgan",
            Method::Iwgan => "iwgan",
            Method::WganStar => "wgan_star",
        }
    }

    /// Row label in result tables.
    pub fn label(self) -> &'static str {
        match self {
            Method::Original => "Original",
            Method::Smote => "SMOTE",
            Method::Gan => "GAN",
            Method::Wgan => "WGAN",
            Method::Awgan => "AWGAN",
            Method::Swgan => "SWGAN",
            Method::Aswgan => "ASWGAN",
            Method::Iwgan => "IWGAN",
            Method::WganStar => "WGAN*",
        }
    }

    pub fn family(self) -> Family {
        match self {
            Method::Original | Method::Smote => Family::Baseline,
            Method::Gan | Method::Wgan => Family::Unrestrained,
            Method::Awgan | Method::Swgan | Method::Aswgan | Method::Iwgan => Family::Static,
            Method::WganStar => Family::Dynamic,
        }
    }

    /// Label used by the ranking, where the four static variants merge.
    pub fn ranking_label(self) -> &'static str {
        match self.family() {
            Family::Static => "SRGAN",
            Family::Dynamic => "DRGAN",
            _ => self.label(),
        }
    }

    /// Topology pattern for the statically restrained methods.
    pub fn pattern(self) -> Option<TopologyPattern> {
        match self {
            Method::Awgan => Some(TopologyPattern::Axisymmetric),
            Method::Swgan => Some(TopologyPattern::SelfSymmetric),
            Method::Aswgan => Some(TopologyPattern::AxiAndSelfSymmetric),
            Method::Iwgan => Some(TopologyPattern::Isomorphic),
            _ => None,
        }
    }

    pub fn from_pattern(p: &TopologyPattern) -> Option<Method> {
        Method::ALL.into_iter().find(|m| m.pattern().as_ref() == Some(p))
    }

    pub fn uses_gan(self) -> bool {
        !matches!(self.family(), Family::Baseline)
    }

    /// Key from which the GAN's random stream is derived. The dynamically
    /// restrained WGAN shares the plain WGAN's stream so the two differ only
    /// by the restraint.
    pub fn gan_seed_key(self) -> &'static str {
        match self {
            Method::WganStar => Method::Wgan.name(),
            m => m.name(),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        Method::ALL
            .into_iter()
            .find(|m| m.name() == lower || m.label().to_ascii_lowercase() == lower)
            .ok_or_else(|| Error::config(format!("unknown method '{s}'")))
    }
}

impl Serialize for Method {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for Method {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// GAN architecture and training settings shared by every GAN method.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GanSettings {
    /// Hidden profile the restraint patterns are built from.
    pub base_hidden: Vec<usize>,
    /// Critic hidden widths of the unrestrained WGAN (and of the dynamically
    /// restrained one, which shares its topology). The generator uses
    /// `base_hidden`.
    pub wgan_d_hidden: Vec<usize>,
    pub alpha: f64,
    pub lambda: f64,
    /// Loop settings; `loss`, `restraint` and `seed` are set per run.
    pub train: GanConfig,
}

impl Default for GanSettings {
    fn default() -> Self {
        GanSettings {
            base_hidden: vec![64, 32],
            wgan_d_hidden: vec![128],
            alpha: RestraintState::DEFAULT_ALPHA,
            lambda: 0.3,
            train: GanConfig::wasserstein(),
        }
    }
}

impl GanSettings {
    pub fn validate(&self) -> Result<()> {
        if self.base_hidden.is_empty() || self.base_hidden.contains(&0) {
            return Err(Error::config("gan.base_hidden must be nonempty positive widths"));
        }
        if self.wgan_d_hidden.is_empty() || self.wgan_d_hidden.contains(&0) {
            return Err(Error::config("gan.wgan_d_hidden must be nonempty positive widths"));
        }
        if !(self.alpha >= 0.0) || !(self.lambda >= 0.0) {
            return Err(Error::config("gan.alpha and gan.lambda must be >= 0"));
        }
        self.train.validate()?;
        Ok(())
    }

    /// Topology pattern of a GAN method.
    pub fn pattern_for(&self, method: Method) -> Option<TopologyPattern> {
        match method {
            Method::Gan => Some(TopologyPattern::Isomorphic),
            Method::Wgan | Method::WganStar => Some(self.unrestrained_pattern()),
            m => m.pattern(),
        }
    }

    pub fn unrestrained_pattern(&self) -> TopologyPattern {
        TopologyPattern::Custom {
            g_hidden: self.base_hidden.clone(),
            d_hidden: self.wgan_d_hidden.clone(),
        }
    }

    /// Training config of a GAN method, without its seed.
    pub fn config_for(&self, method: Method) -> Option<GanConfig> {
        let base = &self.train;
        let cfg = match method.family() {
            Family::Baseline => return None,
            _ if method == Method::Gan => GanConfig {
                loss: LossKind::Vanilla,
                critic_steps: 1,
                restraint: Restraint::None,
                ..base.clone()
            },
            Family::Unrestrained => GanConfig {
                loss: LossKind::Wasserstein,
                restraint: Restraint::None,
                ..base.clone()
            },
            Family::Static => GanConfig {
                loss: LossKind::Wasserstein,
                restraint: Restraint::Static(method.pattern().expect("static method has a pattern")),
                ..base.clone()
            },
            Family::Dynamic => GanConfig {
                loss: LossKind::Wasserstein,
                restraint: Restraint::Dynamic {
                    alpha: self.alpha,
                    lambda: self.lambda,
                },
                ..base.clone()
            },
        };
        Some(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
            assert_eq!(m.label().parse::<Method>().unwrap(), m);
        }
        assert!("dcgan".parse::<Method>().is_err());
    }

    #[test]
    fn static_methods_map_to_patterns() {
        assert_eq!(Method::from_pattern(&TopologyPattern::Isomorphic), Some(Method::Iwgan));
        for m in Method::ALL {
            if let Some(p) = m.pattern() {
                assert_eq!(p.method_name().unwrap(), m.label());
                assert_eq!(m.ranking_label(), "SRGAN");
            }
        }
    }

    #[test]
    fn configs_per_method() {
        let s = GanSettings::default();
        assert!(s.config_for(Method::Smote).is_none());
        assert_eq!(s.config_for(Method::Gan).unwrap().loss, LossKind::Vanilla);
        assert_eq!(s.config_for(Method::Gan).unwrap().critic_steps, 1);
        assert_eq!(s.config_for(Method::Wgan).unwrap().critic_steps, 5);
        assert!(matches!(
            s.config_for(Method::WganStar).unwrap().restraint,
            Restraint::Dynamic { alpha, lambda } if alpha == 0.2 && lambda == 0.3
        ));
        assert_ne!(s.pattern_for(Method::Wgan), s.pattern_for(Method::Iwgan));
        assert_eq!(s.pattern_for(Method::Wgan), s.pattern_for(Method::WganStar));
        assert_eq!(Method::WganStar.gan_seed_key(), Method::Wgan.gan_seed_key());
    }
}
