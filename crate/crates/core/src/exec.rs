//! Work distribution for the verification suite.
//!
//! With the `parallel` feature (default) the maps below fan out over rayon's
//! global pool; without it they run sequentially. Output order always
//! matches input order, so reports are byte-identical either way.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

pub fn map_collect<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.into_iter().map(f).collect()
    }
}

pub fn map_ref<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preserves_order() {
        let out = map_collect((0..1000).collect(), |i: i64| i * i);
        assert!(out.windows(2).all(|w| w[0] < w[1]));
        let refs = map_ref(&[3, 1, 2], |&x| x * 10);
        assert_eq!(refs, vec![30, 10, 20]);
    }
}
