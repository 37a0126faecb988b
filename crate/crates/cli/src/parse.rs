//! Small text formats used on the command line.

use anyhow::{anyhow, bail, Context, Result};
use nqscps::hamiltonian::{heisenberg_chain, tfim, z_field};
use nqscps::zoo::TorusLattice;
use nqscps::{Complex64, Config, Hamiltonian};

/// `"0-1,1-2"`; the empty string is the empty edge list.
pub fn edges(s: &str) -> Result<Vec<(usize, usize)>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            let (a, b) = t.split_once('-').ok_or_else(|| anyhow!("edge {t:?} is not of the form i-j"))?;
            Ok((a.trim().parse()?, b.trim().parse()?))
        })
        .collect::<Result<_>>()
        .with_context(|| format!("bad edge list {s:?}"))
}

/// `"1"`, `"-0.5+2i"`, `"i"`.
pub fn complex(s: &str) -> Result<Complex64> {
    s.trim().parse::<Complex64>().map_err(|e| anyhow!("bad complex number {s:?}: {e}"))
}

pub fn complex_list(s: &str) -> Result<Vec<Complex64>> {
    s.split(',').map(complex).collect()
}

pub fn real_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().with_context(|| format!("bad number {t:?}")))
        .collect()
}

/// `"0110:1,1011:2i"`; the amplitude defaults to 1.
pub fn targets(s: &str) -> Result<Vec<(Config, Complex64)>> {
    s.split(',')
        .map(|t| {
            let (bits, amp) = t.split_once(':').unwrap_or((t, "1"));
            let v: Config = bits.trim().parse().map_err(|e| anyhow!("{e}"))?;
            Ok((v, complex(amp)?))
        })
        .collect()
}

/// Hamiltonian presets, `name:key=value,...`:
///
/// - `tfim:n=6,j=1,h=1[,open]`
/// - `heisenberg:n=6,j=1[,open]`
/// - `z-field:n=6,h=-1`
/// - `toric:lx=2,ly=2`
/// - `rk:lx=2,ly=2,j=1,v=0`
pub fn preset(spec: &str) -> Result<Hamiltonian> {
    let (name, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let mut n = None;
    let (mut j, mut h, mut v) = (1.0, 1.0, 0.0);
    let (mut lx, mut ly) = (None, None);
    let mut periodic = true;
    for kv in rest.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        if kv == "open" {
            periodic = false;
            continue;
        }
        let (k, val) = kv.split_once('=').ok_or_else(|| anyhow!("preset option {kv:?} is not key=value"))?;
        let num = || val.parse::<f64>().with_context(|| format!("preset option {kv:?}"));
        let int = || val.parse::<usize>().with_context(|| format!("preset option {kv:?}"));
        match k {
            "n" => n = Some(int()?),
            "j" => j = num()?,
            "h" => h = num()?,
            "v" => v = num()?,
            "lx" => lx = Some(int()?),
            "ly" => ly = Some(int()?),
            _ => bail!("unknown preset option {k:?}"),
        }
    }
    let need_n = || n.ok_or_else(|| anyhow!("preset {name:?} needs n=<sites>"));
    let lattice = || -> Result<TorusLattice> {
        match (lx, ly) {
            (Some(x), Some(y)) => Ok(TorusLattice::new(x, y)?),
            _ => bail!("preset {name:?} needs lx and ly"),
        }
    };
    Ok(match name {
        "tfim" => tfim(need_n()?, j, h, periodic)?,
        "heisenberg" => heisenberg_chain(need_n()?, j, periodic)?,
        "z-field" => z_field(need_n()?, h)?,
        "toric" => lattice()?.toric_hamiltonian()?,
        "rk" => lattice()?.rk_hamiltonian(j, v)?,
        _ => bail!("unknown Hamiltonian preset {name:?} (tfim, heisenberg, z-field, toric, rk)"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists() {
        assert_eq!(edges("0-1, 2-3").unwrap(), vec![(0, 1), (2, 3)]);
        assert!(edges("").unwrap().is_empty());
        assert!(edges("0:1").is_err());
        assert_eq!(complex("i").unwrap(), Complex64::new(0.0, 1.0));
        assert_eq!(complex_list("1,-0.5+2i").unwrap()[1], Complex64::new(-0.5, 2.0));
        let t = targets("01:2,10").unwrap();
        assert_eq!(t[1].1, Complex64::new(1.0, 0.0));
    }

    #[test]
    fn presets() {
        assert_eq!(preset("tfim:n=4").unwrap().n_sites(), 4);
        assert_eq!(preset("toric:lx=2,ly=2").unwrap().n_sites(), 8);
        assert!(preset("tfim").is_err());
        assert!(preset("nope:n=2").is_err());
        assert!(preset("tfim:n=3,q=1").is_err());
    }
}
