//! Regenerates the bundled fixtures under `fixtures/`.
//!
//! The plus-pentomino chain contracts the peripheral edges of each arm in
//! turn. Every step uses a degree-2 vertex `w` with incident edges `a`, `b`:
//! a spanning tree through `a` that avoids `b` leaves `a` hanging off `b` in
//! φ. Arms end as digons, so each base system is the 8-qubit system with
//! doubled centre edges, certified by relabeling the exhaustively checked
//! `doubled_square` fixture.
//!
//! Run with `cargo run --release --example gen_fixtures`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::path::{Path, PathBuf};

use toric_lc::graph::{GraphFile, Multigraph, SimpleGraph};
use toric_lc::reduction::chain::{
    certify_exhaustive, check_relabeling, BaseCertificateSpec, Certificate, ChainSpec, StepSpec,
    SystemSpec,
};
use toric_lc::reduction::{scan_trees_for_leaf, LeafSpec};
use toric_lc::surface::{polyform_enumerate, square_torus, Embedding, Lattice, Polyform};
use toric_lc::lc::OrbitOptions;

fn cycle(n: u32) -> Embedding {
    let edges: Vec<(u32, u32)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    let m = Multigraph::new((0..n).collect(), &edges).unwrap();
    Embedding::new(m, vec![(0..n as usize).collect()], false, None).unwrap()
}

/// Two squares sharing only vertex 0.
fn bowtie() -> Embedding {
    let edges = [(0, 1), (1, 2), (2, 3), (3, 0), (0, 4), (4, 5), (5, 6), (6, 0)];
    let m = Multigraph::new((0..7).collect(), &edges).unwrap();
    Embedding::new(m, vec![vec![0, 1, 2, 3], vec![4, 5, 6, 7]], false, None).unwrap()
}

/// Square with every side doubled; the outer copies bound digon faces.
fn doubled_square() -> Embedding {
    let sq = [(0, 1), (1, 2), (2, 3), (3, 0)];
    let edges: Vec<(u32, u32)> = sq.iter().chain(sq.iter()).copied().collect();
    let m = Multigraph::new((0..4).collect(), &edges).unwrap();
    let faces = vec![vec![0, 1, 2, 3], vec![0, 4], vec![1, 5], vec![2, 6], vec![3, 7]];
    Embedding::new(m, faces, false, None).unwrap()
}

fn max_neighbours(p: &Polyform) -> usize {
    let cells = p.cells();
    (0..cells.len())
        .map(|i| {
            (0..cells.len())
                .filter(|&j| j != i && cells[i].iter().filter(|c| cells[j].contains(c)).count() == 2)
                .count()
        })
        .max()
        .unwrap_or(0)
}

/// Pretty JSON with arrays of numbers kept on one line.
fn compact_numeric_arrays(pretty: &str) -> String {
    let mut out = String::with_capacity(pretty.len());
    let mut rest = pretty;
    while let Some(i) = rest.find('[') {
        out.push_str(&rest[..i]);
        let tail = &rest[i..];
        let end = tail.find(']').unwrap_or(0);
        let inner = &tail[1..end.max(1)];
        if end > 0 && !inner.contains('[') && inner.chars().all(|c| c.is_ascii_digit() || c == ',' || c.is_whitespace()) {
            let items: Vec<&str> = inner.split(',').map(str::trim).filter(|x| !x.is_empty()).collect();
            out.push('[');
            out.push_str(&items.join(", "));
            out.push(']');
            rest = &tail[end + 1..];
        } else {
            out.push('[');
            rest = &tail[1..];
        }
    }
    out.push_str(rest);
    out
}

fn write_json(dir: &Path, name: &str, value: &impl serde::Serialize) {
    let body = compact_numeric_arrays(&serde_json::to_string_pretty(value).unwrap()) + "\n";
    std::fs::write(dir.join(name), body).unwrap();
    println!("wrote {name}");
}

fn write_setup(dir: &Path, file: &str, e: &Embedding) {
    write_json(dir, file, &e.to_setup());
}

fn system_id(contracted: &BTreeSet<u32>) -> String {
    let mut s = String::from("P");
    for q in contracted {
        s.push_str(&format!("/{q}"));
    }
    s
}

/// Degree-2 vertex whose two edges are both in `arm`; returns them in index
/// order.
fn hinge(e: &Embedding, arm: &BTreeSet<u32>) -> Option<(u32, u32)> {
    let m = e.graph();
    let inc = m.incidence();
    inc.iter().find_map(|es| {
        if es.len() != 2 {
            return None;
        }
        let (x, y) = (m.edge_labels()[es[0]], m.edge_labels()[es[1]]);
        (arm.contains(&x) && arm.contains(&y)).then_some((x, y))
    })
}

fn pentomino_chain(pent: &Embedding, base: &Embedding) -> ChainSpec {
    let faces = pent.faces();
    let centre = faces
        .iter()
        .position(|f| {
            faces.iter().filter(|g| g.iter().any(|e| f.contains(e))).count() == 5
        })
        .expect("plus pentomino has a centre cell");
    let centre_edges: Vec<u32> = faces[centre].iter().map(|&i| pent.qubits()[i]).collect();
    let arms: Vec<BTreeSet<u32>> = faces
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != centre)
        .map(|(_, f)| {
            f.iter()
                .map(|&i| pent.qubits()[i])
                .filter(|q| !centre_edges.contains(q))
                .collect()
        })
        .collect();

    let mut systems: BTreeMap<BTreeSet<u32>, SystemSpec> = BTreeMap::new();
    let mut steps = Vec::new();
    let mut bases = Vec::new();
    let mut queue = VecDeque::from([BTreeSet::new()]);
    while let Some(done) = queue.pop_front() {
        let id = system_id(&done);
        if systems.contains_key(&done) {
            continue;
        }
        systems.insert(
            done.clone(),
            SystemSpec {
                id: id.clone(),
                setup: "pentomino".into(),
                contract: done.iter().copied().collect(),
            },
        );
        let e = pent.contract_all(&done.iter().copied().collect::<Vec<_>>()).unwrap();
        let open_arm = arms.iter().find(|arm| arm.iter().filter(|q| !done.contains(q)).count() > 1);
        let Some(arm) = open_arm else {
            bases.push(done);
            continue;
        };
        let remaining: BTreeSet<u32> = arm.iter().copied().filter(|q| !done.contains(q)).collect();
        let (a, b) = hinge(&e, &remaining).expect("arm has a degree-2 corner");
        let leaf = scan_trees_for_leaf(&e, a, b).unwrap();
        let (tree, _) = leaf.into_iter().next().expect("a tree through a avoiding b exists");
        let (mut da, mut db) = (done.clone(), done.clone());
        da.insert(a);
        db.insert(b);
        steps.push(StepSpec {
            system: id,
            a,
            b,
            reduced_a: system_id(&da),
            reduced_b: system_id(&db),
            leaf: LeafSpec {
                outer: a,
                inner: b,
                tree: Some(tree),
                edges: None,
            },
        });
        queue.push_back(da);
        queue.push_back(db);
    }

    let mut base_specs = vec![BaseCertificateSpec::Exhaustive {
        system: "doubled_square".into(),
        orbit_size: None,
        orbit_digest: None,
    }];
    if let Some(Certificate::Exhaustive { orbit_size, orbit_digest, .. }) =
        certify_exhaustive(base, &OrbitOptions::default()).unwrap()
    {
        base_specs[0] = BaseCertificateSpec::Exhaustive {
            system: "doubled_square".into(),
            orbit_size: Some(orbit_size),
            orbit_digest: Some(orbit_digest),
        };
    } else {
        panic!("doubled_square fixture is local");
    }
    for done in &bases {
        let e = pent.contract_all(&done.iter().copied().collect::<Vec<_>>()).unwrap();
        let map = find_relabeling(base, &e, &centre_edges, &arms, done).expect("base system matches doubled_square");
        base_specs.push(BaseCertificateSpec::Relabeled {
            system: system_id(done),
            source: "doubled_square".into(),
            qubit_map: map,
        });
    }

    let mut sys: Vec<SystemSpec> = systems.into_values().collect();
    sys.push(SystemSpec {
        id: "doubled_square".into(),
        setup: "doubled_square".into(),
        contract: Vec::new(),
    });
    let mut setups = BTreeMap::new();
    setups.insert("pentomino".into(), pent.to_setup());
    setups.insert("doubled_square".into(), base.to_setup());
    ChainSpec {
        name: Some("plus-pentomino".into()),
        target: "P".into(),
        setups,
        systems: sys,
        base: base_specs,
        steps,
    }
}

/// Tries the 24 assignments of doubled_square's centre edges onto the pentomino's
/// centre edges; each outer copy follows its centre edge's arm.
fn find_relabeling(
    base: &Embedding,
    target: &Embedding,
    centre: &[u32],
    arms: &[BTreeSet<u32>],
    done: &BTreeSet<u32>,
) -> Option<Vec<[u32; 2]>> {
    let survivor = |c: u32| -> u32 {
        let (u, v) = target.graph().endpoint_ids(target.qubit_index(c).unwrap());
        let arm = arms
            .iter()
            .find(|arm| {
                arm.iter().any(|&q| {
                    !done.contains(&q) && {
                        let (x, y) = target.graph().endpoint_ids(target.qubit_index(q).unwrap());
                        (x, y) == (u, v) || (y, x) == (u, v)
                    }
                })
            })
            .unwrap();
        *arm.iter().find(|q| !done.contains(q)).unwrap()
    };
    let mut perm: Vec<usize> = (0..4).collect();
    permutations(&mut perm, 0, &mut |p| {
        let mut map = Vec::new();
        for i in 0..4 {
            map.push([i as u32, centre[p[i]]]);
            map.push([4 + i as u32, survivor(centre[p[i]])]);
        }
        check_relabeling(base, target, &map).unwrap().then_some(map)
    })
}

fn permutations<T>(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize]) -> Option<T>) -> Option<T> {
    if k == p.len() {
        return f(p);
    }
    for i in k..p.len() {
        p.swap(k, i);
        if let Some(r) = permutations(p, k + 1, f) {
            return Some(r);
        }
        p.swap(k, i);
    }
    None
}

fn main() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    std::fs::create_dir_all(&dir).unwrap();

    write_setup(&dir, "plaquette4.json", &cycle(4).with_name("plaquette4"));
    write_setup(&dir, "hexagon.json", &cycle(6).with_name("hexagon"));
    write_setup(&dir, "double_plaquette.json", &bowtie().with_name("double-plaquette"));
    write_setup(&dir, "torus2x2.json", &square_torus(2).unwrap());

    let tet = polyform_enumerate(4, Lattice::Triangular)
        .into_iter()
        .find(|p| max_neighbours(p) == 3)
        .unwrap();
    write_setup(
        &dir,
        "tetriamond.json",
        &tet.to_embedding(Lattice::Triangular).unwrap().with_name("tetriamond"),
    );
    let plus = polyform_enumerate(5, Lattice::Square)
        .into_iter()
        .find(|p| max_neighbours(p) == 4)
        .unwrap();
    let pent = plus.to_embedding(Lattice::Square).unwrap().with_name("pentomino");
    write_setup(&dir, "pentomino.json", &pent);
    let base = doubled_square().with_name("doubled_square");
    write_setup(&dir, "doubled_square.json", &base);

    let labels: Vec<u32> = (0..5).collect();
    let mut star = SimpleGraph::star(labels.clone()).unwrap().to_file();
    star.name = Some("star5".into());
    write_json(&dir, "star5.json", &star);
    let mut k5: GraphFile = SimpleGraph::complete(labels).unwrap().to_file();
    k5.name = Some("complete5".into());
    write_json(&dir, "complete5.json", &k5);

    let chain = pentomino_chain(&pent, &base);
    println!(
        "chain: {} systems, {} steps, {} base certificates",
        chain.systems.len(),
        chain.steps.len(),
        chain.base.len()
    );
    write_json(&dir, "pentomino_chain.json", &chain);
}
