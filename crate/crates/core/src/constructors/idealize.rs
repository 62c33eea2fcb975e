use crate::error::Result;
use crate::poly::Poly;
use crate::ring::{PresentedModule, PresentedRing, Ring};

/// `R ⋉ M` for a finitely presented `M = coker(φ)`: adjoin `z_1..z_b` with
/// `z_i z_j = 0` and `Σ_i φ_ij z_i = 0` for every relation column.
pub fn trivial_extension(r: &Ring, m: &PresentedModule) -> Result<Ring> {
    let b = m.rank();
    let mut names = Vec::with_capacity(b);
    let mut probe = r.ambient().clone();
    for _ in 0..b {
        let z = probe.fresh_var("z");
        probe = probe.append_vars(std::slice::from_ref(&z), probe.order());
        names.push(z);
    }
    let s = r.ambient().append_vars(&names, r.ambient().order());
    let n0 = r.nvars();
    let z = |i: usize| Poly::var(&s, n0 + i);
    let mut gens = r.defining().iter().map(|g| g.transfer(&s)).collect::<Result<Vec<_>>>()?;
    for i in 0..b {
        for j in i..b {
            gens.push(&z(i) * &z(j));
        }
    }
    for rel in m.relations() {
        let mut acc = Poly::zero(&s);
        for i in 0..b {
            acc = &acc + &(&rel.component(i).transfer(&s)? * &z(i));
        }
        gens.push(acc);
    }
    PresentedRing::new(&s, &gens)
}
