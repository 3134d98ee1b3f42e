//! Flat `section.key = value` config files.
//!
//! Unspecified keys keep their defaults (1024-sample frames, hop 256, Hann
//! window, mask table F=10/m_F=2/T=45/m_T=2/p=0.1, sigma 0.1). `#` starts a
//! comment; blank lines are ignored.

use super::AugmentPolicy;
use crate::dsp::WindowKind;
use crate::error::{Error, Result};
use std::fs;
use std::path::Path;

/// Reads and parses a config file into a policy.
pub fn load_config(path: &Path) -> Result<AugmentPolicy> {
    let text = fs::read_to_string(path)?;
    parse_config(&text)
}

/// Parses config text; unknown keys, bad values and out-of-range parameters
/// are all reported as [`Error::ConfigError`] naming the key.
pub fn parse_config(text: &str) -> Result<AugmentPolicy> {
    let mut policy = AugmentPolicy::default();
    for (index, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::ConfigError(format!(
                "line {}: expected `section.key = value`, got `{line}`",
                index + 1
            ))
        })?;
        let key = key.trim();
        let value = value.trim();
        apply_key(&mut policy, key, value)?;
    }
    policy
        .validate()
        .map_err(|e| Error::ConfigError(e.to_string()))?;
    Ok(policy)
}

fn apply_key(policy: &mut AugmentPolicy, key: &str, value: &str) -> Result<()> {
    match key {
        "policy.name" => {
            policy.name = value
                .parse()
                .map_err(|e: Error| Error::ConfigError(format!("key `{key}`: {e}")))?;
        }
        "policy.copies_per_input" => policy.copies_per_input = parse_num(key, value)?,
        "stft.n_fft" => policy.stft.n_fft = parse_num(key, value)?,
        "stft.hop" => policy.stft.hop = parse_num(key, value)?,
        "stft.window" => {
            policy.stft.window = match value {
                "hann" | "hanning" => WindowKind::Hann,
                other => {
                    return Err(Error::ConfigError(format!(
                        "key `{key}`: unknown window `{other}` (supported: hann)"
                    )))
                }
            };
        }
        "stft.one_sided" => policy.stft.one_sided = parse_bool(key, value)?,
        "phase.sigma" => policy.rand.sigma = parse_num(key, value)?,
        "phase.freq_mask_max" => policy.mask.freq_mask_max = parse_num(key, value)?,
        "phase.freq_mask_count" => policy.mask.freq_mask_count = parse_num(key, value)?,
        "phase.time_mask_max" => policy.mask.time_mask_max = parse_num(key, value)?,
        "phase.time_mask_count" => policy.mask.time_mask_count = parse_num(key, value)?,
        "phase.time_mask_ratio_cap" => policy.mask.time_mask_ratio_cap = parse_num(key, value)?,
        "vtlp.warp_min" => policy.vtlp.warp_min = parse_num(key, value)?,
        "vtlp.warp_max" => policy.vtlp.warp_max = parse_num(key, value)?,
        "vtlp.boundary_freq" => policy.vtlp.boundary_freq = parse_num(key, value)?,
        "static.angle" => policy.static_angle = parse_num(key, value)?,
        other => {
            return Err(Error::ConfigError(format!("unknown key `{other}`")));
        }
    }
    Ok(())
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value.parse().map_err(|_| {
        Error::ConfigError(format!(
            "key `{key}`: cannot parse `{value}` as {}",
            std::any::type_name::<T>()
        ))
    })
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value {
        "true" => Ok(true),
        "false" => Ok(false),
        other => Err(Error::ConfigError(format!(
            "key `{key}`: expected `true` or `false`, got `{other}`"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase::MaskPolicy;
    use crate::pipeline::PolicyName;

    #[test]
    fn empty_config_yields_defaults() {
        let policy = parse_config("").unwrap();
        assert_eq!(policy, AugmentPolicy::default());
        assert_eq!(policy.stft.n_fft, 1024);
        assert_eq!(policy.stft.hop, 256);
        assert_eq!(policy.mask, MaskPolicy::default());
        assert_eq!(policy.rand.sigma, 0.1);
    }

    #[test]
    fn keys_override_defaults() {
        let text = "\
            # tuned run\n\
            policy.name = phase_perturbation+specaug\n\
            phase.sigma = 0.05\n\
            phase.freq_mask_max = 4   # narrower masks\n\
            stft.hop = 512\n";
        let policy = parse_config(text).unwrap();
        assert_eq!(policy.name, PolicyName::PhasePerturbationSpecAug);
        assert_eq!(policy.rand.sigma, 0.05);
        assert_eq!(policy.mask.freq_mask_max, 4);
        assert_eq!(policy.stft.hop, 512);
        assert_eq!(policy.mask.time_mask_max, 45);
    }

    #[test]
    fn ratio_cap_out_of_range_is_a_config_error() {
        let err = parse_config("phase.time_mask_ratio_cap = 1.5").unwrap_err();
        match err {
            Error::ConfigError(msg) => assert!(msg.contains("time_mask_ratio_cap")),
            other => panic!("expected ConfigError, got {other:?}"),
        }
    }

    #[test]
    fn unknown_key_is_named() {
        let err = parse_config("stft.wndow = hann").unwrap_err();
        match err {
            Error::ConfigError(msg) => assert!(msg.contains("stft.wndow")),
            other => panic!("expected ConfigError, got {other:?}"),
        }
    }

    #[test]
    fn type_mismatch_is_named() {
        let err = parse_config("stft.n_fft = many").unwrap_err();
        match err {
            Error::ConfigError(msg) => {
                assert!(msg.contains("stft.n_fft"));
                assert!(msg.contains("many"));
            }
            other => panic!("expected ConfigError, got {other:?}"),
        }
    }

    #[test]
    fn serialize_parse_is_a_fixed_point() {
        let text = "\
            policy.name = vtlp\n\
            vtlp.warp_max = 1.05\n\
            phase.time_mask_count = 3\n";
        let loaded = parse_config(text).unwrap();
        let canonical = loaded.to_config_string();
        let reloaded = parse_config(&canonical).unwrap();
        assert_eq!(loaded, reloaded);
        assert_eq!(canonical, reloaded.to_config_string());
    }
}
