use chocolate_core::formats::{pattern_from_pbm, pattern_to_pbm, section_from_csv, section_to_csv};
use chocolate_core::sierpinski::{fit_similarity, integer_section};
use chocolate_core::{best_move, is_p_position, pattern, Cell, GameState, Player};

#[test]
fn pattern_survives_pbm() {
    for m in [1, 2, 7, 64, 65, 200] {
        let p = pattern(m).unwrap();
        assert_eq!(pattern_from_pbm(&pattern_to_pbm(&p)).unwrap(), p);
    }
}

#[test]
fn section_maps_onto_pattern() {
    let sec = integer_section(5, 21).unwrap();
    let p = pattern(21).unwrap();
    let map = fit_similarity(&sec, &p).unwrap();
    for d in &sec.diamonds {
        let c = map.cell_of(d.cx, d.cy).unwrap();
        assert!(p.contains(c));
    }
    assert_eq!(section_from_csv(&section_to_csv(&sec)).unwrap(), sec);
}

#[test]
fn engine_move_lands_on_a_p_position() {
    let s = GameState::new(13, 13, Cell::new(4, 9), Player::Engine).unwrap();
    assert!(!is_p_position(4, 9, 13).unwrap());
    let next = s.apply_move(best_move(&s).unwrap()).unwrap();
    assert_eq!(next.nim_value(), 0);
    assert_eq!(next.mover, Player::Human);
}
