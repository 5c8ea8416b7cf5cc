//! Additivity over components and invariance under equivalences.

use std::sync::Arc;

use serde::Serialize;

use crate::coefficients::{pullback, NormedModule};
use crate::exact::Q;
use crate::groupoid::{connected_components, GroupoidMap};

use super::complex::CochainComplex;
use super::reduced::{cochain_complex, transport};
use super::{CohomologyError, Limits};

#[derive(Debug, Clone, Serialize)]
pub struct AdditivityDegree {
    pub degree: usize,
    pub dim: usize,
    pub component_dims: Vec<usize>,
    /// seminorm of each basis class
    pub seminorms: Vec<Q>,
    /// per basis class, the seminorms of its restrictions to the components
    pub component_seminorms: Vec<Vec<Q>>,
    pub dims_match: bool,
    pub seminorms_match: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct AdditivityReport {
    pub components: usize,
    pub degrees: Vec<AdditivityDegree>,
}

impl AdditivityReport {
    pub fn passed(&self) -> bool {
        self.degrees.iter().all(|d| d.dims_match && d.seminorms_match)
    }
}

/// Compares `H^*_b(G; V)` with the product over the connected components.
pub fn additivity_check(v: &Arc<NormedModule>, n: usize, limits: &Limits) -> Result<AdditivityReport, CohomologyError> {
    let g = &v.base;
    let total = cochain_complex(v, n, limits.path_cap)?;
    let h_total = total.complex.cohomology_all()?;
    let comps = connected_components(g);
    let mut parts = Vec::new();
    for c in &comps {
        let m = Arc::new(pullback(&c.inclusion, v)?);
        let cx = cochain_complex(&m, n, limits.path_cap)?;
        let h = cx.complex.cohomology_all()?;
        parts.push((c, cx, h));
    }
    let mut degrees = Vec::new();
    for k in 0..=n {
        let component_dims: Vec<usize> = parts.iter().map(|(_, _, h)| h[k].dim).collect();
        let dims_match = component_dims.iter().sum::<usize>() == h_total[k].dim;
        let restrictions: Vec<_> = parts
            .iter()
            .map(|(c, cx, _)| {
                transport(&cx.basis, k, &total.basis, k, |p| {
                    vec![(p.iter().map(|&a| c.inclusion.morphisms[a]).collect(), 1)]
                })
            })
            .collect();
        let mut seminorms = Vec::new();
        let mut component_seminorms = Vec::new();
        let mut seminorms_match = true;
        for z in &h_total[k].representatives {
            let s = total.complex.class_seminorm(k, z, limits.lp_var_cap)?.value;
            let mut per = Vec::new();
            for ((_, cx, _), r) in parts.iter().zip(&restrictions) {
                per.push(cx.complex.class_seminorm(k, &r.mul_vec(z), limits.lp_var_cap)?.value);
            }
            let max = per.iter().cloned().max().unwrap_or_else(Q::zero);
            seminorms_match &= max == s;
            seminorms.push(s);
            component_seminorms.push(per);
        }
        degrees.push(AdditivityDegree {
            degree: k,
            dim: h_total[k].dim,
            component_dims,
            seminorms,
            component_seminorms,
            dims_match,
            seminorms_match,
        });
    }
    Ok(AdditivityReport {
        components: comps.len(),
        degrees,
    })
}

/// Decides whether `f` is fully faithful and essentially surjective.
pub fn is_equivalence(f: &GroupoidMap) -> Result<(), String> {
    let (g, h) = (&f.dom, &f.cod);
    for x in 0..g.num_objects() {
        for y in 0..g.num_objects() {
            let mut image: Vec<usize> = g.hom(x, y).iter().map(|&a| f.morphisms[a]).collect();
            image.sort_unstable();
            image.dedup();
            let target = h.hom(f.objects[x], f.objects[y]);
            if image.len() != g.hom(x, y).len() {
                return Err(format!("not faithful on morphisms {x} -> {y}"));
            }
            if image.len() != target.len() {
                return Err(format!("not full on morphisms {x} -> {y}"));
            }
        }
    }
    let mut part = vec![0; h.num_objects()];
    for (c, objs) in h.component_partition().iter().enumerate() {
        for &o in objs {
            part[o] = c;
        }
    }
    for e in 0..h.num_objects() {
        if !f.objects.iter().any(|&x| part[x] == part[e]) {
            return Err(format!("object {e} is not isomorphic to any image object"));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct EquivalenceDegree {
    pub degree: usize,
    pub dim_cod: usize,
    pub dim_dom: usize,
    pub rank: usize,
    pub seminorms_cod: Vec<Q>,
    pub seminorms_dom: Vec<Q>,
    pub isomorphism: bool,
    pub isometric: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct EquivalenceReport {
    pub degrees: Vec<EquivalenceDegree>,
}

impl EquivalenceReport {
    pub fn passed(&self) -> bool {
        self.degrees.iter().all(|d| d.isomorphism && d.isometric)
    }
}

/// Pulls cochains back along an equivalence `f : G → H` and compares
/// `H^*_b(H; V)` with `H^*_b(G; f*V)` class by class.
pub fn equivalence_invariance_check(
    f: &GroupoidMap,
    v: &Arc<NormedModule>,
    n: usize,
    limits: &Limits,
) -> Result<EquivalenceReport, CohomologyError> {
    f.audit()?;
    is_equivalence(f).map_err(CohomologyError::WitnessInvalid)?;
    let cod = cochain_complex(v, n, limits.path_cap)?;
    let dom_module = Arc::new(pullback(f, v)?);
    let dom = cochain_complex(&dom_module, n, limits.path_cap)?;
    let mut degrees = Vec::new();
    for k in 0..=n {
        let h_cod = cod.complex.cohomology(k)?;
        let h_dom = dom.complex.cohomology(k)?;
        let pull = transport(&dom.basis, k, &cod.basis, k, |p| {
            vec![(p.iter().map(|&a| f.morphisms[a]).collect(), 1)]
        });
        let m = CochainComplex::induced_on_cohomology(&pull, &dom.complex, &h_cod, &h_dom)?;
        let rank = m.rank();
        let isomorphism = h_cod.dim == h_dom.dim && rank == h_cod.dim;
        let mut seminorms_cod = Vec::new();
        let mut seminorms_dom = Vec::new();
        for z in &h_cod.representatives {
            seminorms_cod.push(cod.complex.class_seminorm(k, z, limits.lp_var_cap)?.value);
            seminorms_dom.push(dom.complex.class_seminorm(k, &pull.mul_vec(z), limits.lp_var_cap)?.value);
        }
        degrees.push(EquivalenceDegree {
            degree: k,
            dim_cod: h_cod.dim,
            dim_dom: h_dom.dim,
            rank,
            isometric: seminorms_cod == seminorms_dom,
            seminorms_cod,
            seminorms_dom,
            isomorphism,
        });
    }
    Ok(EquivalenceReport { degrees })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::{linf_module, trivial_module};
    use crate::groupoid::{skeleton_retraction, FiniteGroupoid, GroupTable};

    #[test]
    fn additivity_on_disjoint_union() {
        let a = FiniteGroupoid::from_group(&GroupTable::cyclic(2));
        let b = FiniteGroupoid::from_group(&GroupTable::cyclic(3));
        let g = Arc::new(FiniteGroupoid::disjoint_union(&[&a, &b]));
        let v = Arc::new(trivial_module(&g));
        let r = additivity_check(&v, 2, &Limits::default()).unwrap();
        assert!(r.passed());
        assert_eq!(r.degrees.iter().map(|d| d.dim).collect::<Vec<_>>(), vec![2, 0, 0]);
        assert_eq!(r.degrees[0].component_dims, vec![1, 1]);
    }

    #[test]
    fn blow_up_equivalent_to_group() {
        let z2 = GroupTable::cyclic(2);
        let b = Arc::new(FiniteGroupoid::blow_up(&z2, 2).unwrap());
        let ret = skeleton_retraction(&b, None).unwrap();
        let v = Arc::new(trivial_module(&b));
        let (l, _) = linf_module(&v).unwrap();
        for m in [v, l] {
            let r = equivalence_invariance_check(&ret.include, &m, 2, &Limits::default()).unwrap();
            assert!(r.passed(), "{r:?}");
        }
        let not_eq = GroupoidMap::new(
            Arc::new(FiniteGroupoid::from_group(&GroupTable::trivial())),
            Arc::new(FiniteGroupoid::from_group(&z2)),
            vec![0],
            vec![0],
        )
        .unwrap();
        let w = Arc::new(trivial_module(&not_eq.cod));
        assert!(matches!(
            equivalence_invariance_check(&not_eq, &w, 1, &Limits::default()),
            Err(CohomologyError::WitnessInvalid(_))
        ));
    }

    /// `C(to)` and `h·C(from)` induce the same map on cohomology.
    #[test]
    fn homotopic_maps_agree_on_cohomology() {
        let z2 = GroupTable::cyclic(2);
        let b = Arc::new(FiniteGroupoid::blow_up(&z2, 2).unwrap());
        let ret = skeleton_retraction(&b, None).unwrap();
        let h = &ret.homotopy;
        let v = Arc::new(trivial_module(&b));
        let (l, _) = linf_module(&v).unwrap();
        let cod = cochain_complex(&l, 2, 1000).unwrap();
        let dom_module = Arc::new(pullback(&h.to, &l).unwrap());
        let dom = cochain_complex(&dom_module, 2, 1000).unwrap();
        let c = &h.from.cod;
        let d = &h.from.dom;
        for k in 0..=2 {
            let plain = transport(&dom.basis, k, &cod.basis, k, |p| {
                vec![(p.iter().map(|&a| h.to.morphisms[a]).collect(), 1)]
            });
            let twisted = transport(&dom.basis, k, &cod.basis, k, |p| {
                let mut q: Vec<usize> = p.iter().map(|&a| h.from.morphisms[a]).collect();
                q[0] = c.compose_unchecked(h.component[d.target(p[0])], q[0]);
                vec![(q, 1)]
            });
            let hc = cod.complex.cohomology(k).unwrap();
            let hd = dom.complex.cohomology(k).unwrap();
            let a = CochainComplex::induced_on_cohomology(&plain, &dom.complex, &hc, &hd).unwrap();
            let b2 = CochainComplex::induced_on_cohomology(&twisted, &dom.complex, &hc, &hd).unwrap();
            assert_eq!(a, b2, "degree {k}");
        }
    }
}
