use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use snort_core::families::{make_caterpillar, make_joined_stars, make_star, CaterpillarSpec};
use snort_core::{canonical_key, components, Engine, GameStore, Player, Position, Tint};

fn random_position(seed: u64, max_n: usize) -> Position {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(0..=max_n);
    let mut p = Position::new();
    for i in 0..n {
        let tint = match rng.gen_range(0..5) {
            0 => Tint::Blue,
            1 => Tint::Red,
            _ => Tint::None,
        };
        p.add_vertex(&format!("v{i}"), tint).unwrap();
    }
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(0.25) {
                p.add_edge(&format!("v{i}"), &format!("v{j}")).unwrap();
            }
        }
    }
    p
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn value_is_sum_of_components(seed in any::<u64>()) {
        let p = random_position(seed, 10).normalize();
        let mut e = Engine::new();
        let whole = e.value(&p).unwrap();
        let mut total = GameStore::ZERO;
        for c in components(&p) {
            let v = Engine::new().canonical_form(&c).unwrap();
            let g = snort_core::parse_game(e.store(), &v).unwrap();
            total = e.store().sum(total, g);
        }
        prop_assert!(e.store().eq(whole, total));
    }

    #[test]
    fn colour_swap_negates(seed in any::<u64>()) {
        let p = random_position(seed, 9);
        let mut e = Engine::new();
        let g = e.value(&p).unwrap();
        let h = e.value(&p.colour_swap()).unwrap();
        let ng = e.store().negate(g);
        prop_assert!(e.store().eq(ng, h));
    }

    #[test]
    fn normalize_and_play_are_normalized(seed in any::<u64>()) {
        let p = random_position(seed, 10);
        let n = p.normalize();
        prop_assert_eq!(n.normalize(), n.clone());
        prop_assert!(n.is_normalized());
        for who in [Player::Left, Player::Right] {
            let moves: Vec<String> = n.legal_moves(who).into_iter().map(str::to_string).collect();
            for v in moves {
                let after = n.play(who, &v).unwrap();
                prop_assert!(after.is_normalized());
                prop_assert!(after.index_of(&v).is_none());
            }
        }
    }

    #[test]
    fn key_ignores_labels(seed in any::<u64>()) {
        let p = random_position(seed, 10);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let mut perm: Vec<usize> = (0..p.vertex_count()).collect();
        for i in (1..perm.len()).rev() {
            perm.swap(i, rng.gen_range(0..=i));
        }
        let q = p.permuted(&perm);
        prop_assert_eq!(canonical_key(&p).unwrap(), canonical_key(&q).unwrap());
        let mut e = Engine::new();
        let a = e.value(&p).unwrap();
        let b = Engine::new().canonical_form(&q).unwrap();
        prop_assert_eq!(e.format(a), b);
    }
}

#[test]
fn degrees_of_families() {
    for n in 1..=6 {
        let c = make_caterpillar(CaterpillarSpec::new(n).unwrap());
        assert_eq!(c.degree(), n + 2);
        assert_eq!(c.second_degree(), 2 * n + 2);
    }
    let k2 = make_joined_stars(0, Tint::None, Tint::None);
    assert_eq!((k2.degree(), k2.second_degree()), (1, 0));
    assert_eq!(
        (Position::new().degree(), Position::new().second_degree()),
        (0, 0)
    );
}

#[test]
fn legal_move_examples() {
    assert!(Position::new().legal_moves(Player::Left).is_empty());
    assert_eq!(make_star(4, Tint::None).legal_moves(Player::Left).len(), 5);
    let mut blue = Position::new();
    blue.add_vertex("x", Tint::Blue).unwrap();
    assert!(blue.legal_moves(Player::Right).is_empty());
    assert_eq!(blue.legal_moves(Player::Left), ["x"]);
}

#[test]
fn centre_move_leaves_tinted_vertices() {
    let after = make_star(5, Tint::None).play(Player::Left, "c").unwrap();
    assert_eq!(after.vertex_count(), 5);
    assert_eq!(after.edge_count(), 0);
    assert!(after.vertices().iter().all(|v| v.tint == Tint::Blue));
    assert_eq!(Engine::new().canonical_form(&after).unwrap(), "5");
}

#[test]
fn joined_same_tint_centres_lose_their_edge() {
    let p = make_joined_stars(3, Tint::Blue, Tint::Blue).normalize();
    assert_eq!(p.edge_count(), 6);
    assert_eq!(components(&p).len(), 2);
    let q = make_joined_stars(3, Tint::Blue, Tint::Red).normalize();
    assert_eq!(q.edge_count(), 7);
}
