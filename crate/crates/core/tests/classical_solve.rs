mod common;

use qge::game::{self, Game, MixedProfile};
use qge::solve::{self, correlated_eq_lp, support_enumeration, welfare};
use rand::RngCore as _;

#[test]
fn battle_of_sexes_has_three_equilibria() {
    let a = vec![vec![2.0, 0.0], vec![0.0, 1.0]];
    let b = vec![vec![1.0, 0.0], vec![0.0, 2.0]];
    let g = Game::bimatrix(&a, &b).unwrap();
    let eqs = support_enumeration(&g).unwrap();
    assert_eq!(eqs.len(), 3);
    // Pure equilibria come first.
    let first = eqs.first().unwrap();
    assert_eq!(first.supports.0.count_ones(), 1);
    let mixed = eqs.iter().find(|e| e.supports.0.count_ones() == 2).unwrap();
    assert!((mixed.profile.player(0)[0] - 2.0 / 3.0).abs() < 1e-9);
    assert!((mixed.profile.player(1)[0] - 1.0 / 3.0).abs() < 1e-9);
}

#[test]
fn every_enumerated_profile_is_an_equilibrium() {
    let mut r = common::rng(21);
    for _ in 0..40 {
        let counts = common::random_counts(&mut r, 2, 4);
        let g = common::random_game(&mut r, &counts);
        let eqs = support_enumeration(&g).unwrap();
        assert!(!eqs.is_empty());
        for e in eqs.iter() {
            assert!(game::max_nash_regret(&g, &e.profile).unwrap() < 1e-7);
        }
    }
}

#[test]
fn enumeration_rejects_too_many_players_or_strategies() {
    let mut r = common::rng(22);
    let g = common::random_game(&mut r, &[2, 2, 2]);
    assert!(support_enumeration(&g).is_err());
    let g = common::random_game(&mut r, &[solve::MAX_ENUMERATION_STRATEGIES + 1, 2]);
    assert!(support_enumeration(&g).is_err());
}

#[test]
fn lp_maximises_welfare_among_correlated_equilibria() {
    // Chicken: welfare optimum over CEs is 10.5 (1/4, 1/4, 1/2 off the crash).
    let a = vec![vec![0.0, 7.0], vec![2.0, 6.0]];
    let b = vec![vec![0.0, 2.0], vec![7.0, 6.0]];
    let g = Game::bimatrix(&a, &b).unwrap();
    let w = welfare(&g);
    let p = correlated_eq_lp(&g, &w).unwrap();
    let value: f64 = p.probs().iter().zip(&w).map(|(a, b)| a * b).sum();
    assert!((value - 10.5).abs() < 1e-7, "value {value}");
    assert!(game::max_correlated_regret(&g, &p).unwrap() < 1e-8);
}

#[test]
fn lp_solutions_are_correlated_equilibria_on_random_games() {
    let mut r = common::rng(23);
    for _ in 0..60 {
        let players = 2 + (r.next_u32() % 2) as usize;
        let counts = common::random_counts(&mut r, players, 3);
        let g = common::random_game(&mut r, &counts);
        let p = correlated_eq_lp(&g, &welfare(&g)).unwrap();
        assert!(game::max_correlated_regret(&g, &p).unwrap() < 1e-8);
    }
}

#[test]
fn lp_objective_dimension_is_checked() {
    let g = Game::common_payoff(&[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
    assert!(correlated_eq_lp(&g, &[1.0; 3]).is_err());
}

#[test]
fn sampler_is_reproducible_and_respects_support() {
    let p = MixedProfile::new(vec![vec![0.0, 1.0, 0.0], vec![0.5, 0.5]]).unwrap();
    let a = solve::sample_pure(&p, 9).unwrap();
    let b = solve::sample_pure(&p, 9).unwrap();
    assert_eq!(a, b);
    assert_eq!(a[0], 1);
}
