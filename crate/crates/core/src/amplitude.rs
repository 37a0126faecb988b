use crate::config::Config;
use crate::scaled::ScaledComplex;

/// Anything that maps a configuration to an amplitude.
///
/// Implementations must be deterministic: the same configuration always
/// yields the identical value. Sources are shared read-only between sampler
/// threads, hence the `Sync` bound.
pub trait AmplitudeSource: Sync {
    fn n_sites(&self) -> usize;
    fn amplitude(&self, v: &Config) -> ScaledComplex;
}

impl<T: AmplitudeSource + ?Sized> AmplitudeSource for &T {
    fn n_sites(&self) -> usize {
        (**self).n_sites()
    }
    fn amplitude(&self, v: &Config) -> ScaledComplex {
        (**self).amplitude(v)
    }
}

impl<T: AmplitudeSource + ?Sized> AmplitudeSource for Box<T> {
    fn n_sites(&self) -> usize {
        (**self).n_sites()
    }
    fn amplitude(&self, v: &Config) -> ScaledComplex {
        (**self).amplitude(v)
    }
}

/// Wraps a closure as an amplitude source.
pub struct FnAmplitude<F> {
    n: usize,
    f: F,
}

impl<F> FnAmplitude<F>
where
    F: Fn(&Config) -> ScaledComplex + Sync,
{
    pub fn new(n: usize, f: F) -> Self {
        Self { n, f }
    }
}

impl<F> AmplitudeSource for FnAmplitude<F>
where
    F: Fn(&Config) -> ScaledComplex + Sync,
{
    fn n_sites(&self) -> usize {
        self.n
    }
    fn amplitude(&self, v: &Config) -> ScaledComplex {
        (self.f)(v)
    }
}

/// The equal-weight state `|+>^N`.
#[derive(Clone, Copy, Debug)]
pub struct Uniform(pub usize);

impl AmplitudeSource for Uniform {
    fn n_sites(&self) -> usize {
        self.0
    }
    fn amplitude(&self, _v: &Config) -> ScaledComplex {
        ScaledComplex::ONE
    }
}
