use std::collections::BTreeSet;

use proptest::prelude::*;
use schupp_core::lattice::{build, cut, double};
use schupp_core::{
    ground_energy, Crossing, CutSpec, Family, HamiltonianOperator, LanczosConfig, LatticeSpec,
    SectorBasis, SectorPolicy, Side,
};

type Edges = BTreeSet<(usize, usize, u64)>;

fn edges(
    spec: &LatticeSpec,
    map: impl Fn(usize, usize) -> (usize, usize),
    target_ny: usize,
) -> Edges {
    build(spec)
        .unwrap()
        .bonds()
        .iter()
        .map(|b| {
            let (xi, yi) = map(b.i / spec.ny, b.i % spec.ny);
            let (xj, yj) = map(b.j / spec.ny, b.j % spec.ny);
            let (i, j) = (xi * target_ny + yi, xj * target_ny + yj);
            (i.min(j), i.max(j), b.w.to_bits())
        })
        .collect()
}

fn any_spec() -> impl Strategy<Value = LatticeSpec> {
    let ladder = (2usize..=9, 0usize..4).prop_map(|(len, f)| match f {
        0 => LatticeSpec::square_ladder(len),
        1 => LatticeSpec::crossed_ladder(len),
        2 => LatticeSpec::pyro_a(len),
        _ => LatticeSpec::pyro_b(len),
    });
    let rect = (2usize..=6, 2usize..=4, 0usize..4)
        .prop_map(|(nx, ny, c)| LatticeSpec::rectangle(nx, ny, Crossing::ALL[c]));
    prop_oneof![(2usize..=16).prop_map(LatticeSpec::chain), ladder, rect]
}

proptest! {
    #[test]
    fn rank_unrank_bijection(n in 1usize..=20, k_frac in 0.0f64..=1.0, picks in prop::collection::vec(any::<u64>(), 8)) {
        let k = (k_frac * n as f64).round() as usize;
        let basis = SectorBasis::enumerate(n, k).unwrap();
        for p in picks {
            let idx = (p % basis.dim() as u64) as usize;
            let c = basis.unrank(idx).unwrap();
            prop_assert_eq!(c.count_ones() as usize, k);
            prop_assert_eq!(basis.rank(c).unwrap(), idx);
        }
    }

    #[test]
    fn cut_partitions_edges(spec in any_spec(), m_frac in 0.0f64..1.0) {
        let m = 1 + (m_frac * (spec.nx - 1) as f64) as usize;
        let (left, right, iface) = cut(&spec, &CutSpec::new(m, spec.nx - m).unwrap()).unwrap();
        let ny = spec.ny;
        let mut union = edges(&left, |x, y| (x, y), ny);
        union.extend(edges(&right, |x, y| (x + m, y), ny));
        for b in iface.bonds() {
            union.insert((b.i.min(b.j), b.i.max(b.j), b.w.to_bits()));
        }
        prop_assert_eq!(union, edges(&spec, |x, y| (x, y), ny));
    }

    #[test]
    fn doubled_parts_are_mirror_symmetric(spec in any_spec(), m_frac in 0.0f64..1.0) {
        let m = 1 + (m_frac * (spec.nx - 1) as f64) as usize;
        let n = spec.nx - m;
        let (left, right, iface) = cut(&spec, &CutSpec::new(m, n).unwrap()).unwrap();
        let ny = spec.ny;
        for (part, side) in [(left, Side::Left), (right, Side::Right)] {
            let d = double(&part, &iface, side).unwrap();
            prop_assert_eq!(d.nx, 2 * part.nx);
            let width = d.nx;
            let mirrored = edges(&d, |x, y| (width - 1 - x, y), ny);
            prop_assert_eq!(&mirrored, &edges(&d, |x, y| (x, y), ny));
            // the original part sits on its own side of the doubled lattice
            let offset = if side == Side::Left { 0 } else { part.nx };
            let own = edges(&part, |x, y| (x + offset, y), ny);
            prop_assert!(own.is_subset(&edges(&d, |x, y| (x, y), ny)));
        }
    }

    #[test]
    fn operator_is_symmetric(spec in any_spec().prop_filter("small", |s| s.n_sites() <= 14), seed in any::<u64>()) {
        let n = spec.n_sites();
        let op = HamiltonianOperator::new(build(&spec).unwrap(), SectorBasis::enumerate(n, n / 2).unwrap()).unwrap();
        let dim = op.basis().dim();
        let mut s = seed | 1;
        let mut rnd = || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (s >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let x: Vec<f64> = (0..dim).map(|_| rnd()).collect();
        let y: Vec<f64> = (0..dim).map(|_| rnd()).collect();
        let hx = op.apply(&x).unwrap();
        let hy = op.apply(&y).unwrap();
        let a: f64 = hx.iter().zip(&y).map(|(p, q)| p * q).sum();
        let b: f64 = x.iter().zip(&hy).map(|(p, q)| p * q).sum();
        prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()));
    }
}

#[test]
fn odd_pyrochlore_types_coincide() {
    let cfg = LanczosConfig::default();
    for len in [3, 5, 7] {
        let a = LatticeSpec::pyro_a(len);
        let b = LatticeSpec::pyro_b(len);
        assert_eq!(
            edges(&a, |x, y| (len - 1 - x, y), 2),
            edges(&b, |x, y| (x, y), 2)
        );
        let ea = ground_energy(&a, &cfg, SectorPolicy::MinAbsSz)
            .unwrap()
            .energy();
        let eb = ground_energy(&b, &cfg, SectorPolicy::MinAbsSz)
            .unwrap()
            .energy();
        assert!((ea - eb).abs() < 1e-11, "len {len}");
    }
}

#[test]
fn even_pyrochlore_types_differ() {
    let a = LatticeSpec::pyro_a(6);
    let b = LatticeSpec::pyro_b(6);
    assert_ne!(edges(&a, |x, y| (5 - x, y), 2), edges(&b, |x, y| (x, y), 2));
    assert_eq!(a.family, Family::PyroLadderA);
}
