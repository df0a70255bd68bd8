mod common;

use qge::game::{self, Game, JointDistribution, MixedProfile};
use qge::Error;

#[test]
fn joint_index_is_row_major_with_player_zero_slowest() {
    let g = Game::new(vec![2, 3], vec![vec![0.0; 6], vec![0.0; 6]]).unwrap();
    assert_eq!(g.joint_index(&[0, 0]), 0);
    assert_eq!(g.joint_index(&[0, 2]), 2);
    assert_eq!(g.joint_index(&[1, 0]), 3);
    for j in 0..6 {
        assert_eq!(g.joint_index(&g.decode(j)), j);
    }
}

#[test]
fn bimatrix_constructor_matches_flat_layout() {
    let a = vec![vec![1.0, 2.0], vec![3.0, 4.0]];
    let b = vec![vec![5.0, 6.0], vec![7.0, 8.0]];
    let g = Game::bimatrix(&a, &b).unwrap();
    assert_eq!(g.utility(0, g.joint_index(&[1, 0])), 3.0);
    assert_eq!(g.utility(1, g.joint_index(&[0, 1])), 6.0);
}

#[test]
fn malformed_games_are_rejected() {
    assert!(matches!(
        Game::new(vec![2, 2], vec![vec![0.0; 4]]),
        Err(Error::InvalidGame(_))
    ));
    assert!(matches!(
        Game::new(vec![2, 0], vec![vec![], vec![]]),
        Err(Error::InvalidGame(_))
    ));
    assert!(Game::new(vec![2, 2], vec![vec![0.0; 3], vec![0.0; 4]]).is_err());
    assert!(Game::new(
        vec![2, 2],
        vec![vec![f64::NAN, 0.0, 0.0, 0.0], vec![0.0; 4]]
    )
    .is_err());
}

#[test]
fn positive_normalization_requires_unit_interval() {
    let g = Game::common_payoff(&[vec![0.0, 0.5], vec![0.5, 1.0]]).unwrap();
    assert!(g.with_positive_normalization().is_ok());
    let g = Game::common_payoff(&[vec![0.0, 2.0], vec![0.5, 1.0]]).unwrap();
    assert!(g.with_positive_normalization().is_err());
}

#[test]
fn probability_vectors_are_validated() {
    assert!(JointDistribution::new(vec![0.5, 0.6]).is_err());
    assert!(JointDistribution::new(vec![1.2, -0.2]).is_err());
    assert!(MixedProfile::new(vec![vec![1.0], vec![0.3, 0.3]]).is_err());
    assert!(JointDistribution::new(vec![0.25; 4]).is_ok());
}

#[test]
fn matching_pennies_uniform_is_nash_and_pure_is_not() {
    let a = vec![vec![1.0, -1.0], vec![-1.0, 1.0]];
    let b = vec![vec![-1.0, 1.0], vec![1.0, -1.0]];
    let g = Game::bimatrix(&a, &b).unwrap();
    let uniform = MixedProfile::uniform(&[2, 2]);
    assert!(game::max_nash_regret(&g, &uniform).unwrap() < 1e-12);
    let pure = MixedProfile::pure(&[2, 2], &[0, 0]).unwrap();
    assert!((game::max_nash_regret(&g, &pure).unwrap() - 2.0).abs() < 1e-12);
    // The product of a Nash profile is a correlated equilibrium.
    assert!(game::max_correlated_regret(&g, &uniform.to_joint()).unwrap() < 1e-12);
}

#[test]
fn chicken_traffic_light_is_correlated_but_not_product() {
    // Chicken: (dare, chicken) rows; the 1/3 mix off the crash cell is a CE.
    let a = vec![vec![0.0, 7.0], vec![2.0, 6.0]];
    let b = vec![vec![0.0, 2.0], vec![7.0, 6.0]];
    let g = Game::bimatrix(&a, &b).unwrap();
    let p = JointDistribution::new(vec![0.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0]).unwrap();
    assert!(game::max_correlated_regret(&g, &p).unwrap() < 1e-12);
    let crash = JointDistribution::point_mass(4, 0).unwrap();
    assert!(game::max_correlated_regret(&g, &crash).unwrap() > 1.0);
}

#[test]
fn expected_utility_matches_manual_sum() {
    let mut r = common::rng(11);
    let g = common::random_game(&mut r, &[3, 2]);
    let p = JointDistribution::uniform(6);
    let manual: f64 = (0..6).map(|j| g.utility(1, j)).sum::<f64>() / 6.0;
    assert!((game::expected_utility(&g, &p, 1).unwrap() - manual).abs() < 1e-12);
}

#[test]
fn marginals_of_product_recover_factors() {
    let p = MixedProfile::new(vec![vec![0.2, 0.8], vec![0.1, 0.3, 0.6]]).unwrap();
    let joint = p.to_joint();
    for i in 0..2 {
        let m = joint.marginal(&[2, 3], i);
        for (a, b) in m.iter().zip(p.player(i)) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}

#[test]
fn invalid_player_index_is_an_error() {
    let g = Game::common_payoff(&[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
    let p = JointDistribution::uniform(4);
    assert!(matches!(
        game::expected_utility(&g, &p, 2),
        Err(Error::InvalidPlayer {
            index: 2,
            players: 2
        })
    ));
}
