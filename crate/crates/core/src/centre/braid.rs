//! `⟨g, t | g t g = t g t⟩` against the torus-knot amalgam `⟨x⟩ *_{x² = y³} ⟨y⟩`
//! through `x = g t g`, `y = g t`.

use crate::products::{afp_centre, afp_normal_form, AmalgamatedProduct, ProductError, Side};
use crate::rewriting::GroupDescriptor;
use crate::truth::Equality;
use crate::words::Alphabet;
use crate::words::{CyclicWord, FreeWord, Gen, Letter, RelativeWord};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BraidNote {
    /// `x`, `y` in terms of `g`, `t` and back.
    pub dictionary: Vec<(String, String)>,
    pub amalgam_centre: Vec<String>,
    /// Image of the amalgam's central generator.
    pub centre: String,
    pub relator_maps_to_identity: bool,
    pub amalgam_relator_is_conjugate_of_w: bool,
    pub round_trip: bool,
}

fn word(s: &[(u32, i64)]) -> FreeWord {
    FreeWord::from_powers(s)
}

fn braid_letters() -> RelativeWord {
    let (g, t) = (Gen::pos(0), Gen::pos(0));
    RelativeWord::from_letters([
        Letter::Coef(g),
        Letter::Var(t),
        Letter::Coef(g),
        Letter::Var(t.inv()),
        Letter::Coef(g.inv()),
        Letter::Var(t.inv()),
    ])
}

/// Whether `w` is a cyclic permutation of `g t g t^-1 g^-1 t^-1` or its inverse.
pub fn is_braid_relator(w: &RelativeWord) -> bool {
    let Some(c) = CyclicWord::from_cyclically_reduced(w) else { return false };
    let b = braid_letters();
    [b.clone(), b.inverse()].iter().any(|b| CyclicWord::from_cyclically_reduced(b).as_ref() == Some(&c))
}

fn torus_knot() -> Result<AmalgamatedProduct, ProductError> {
    AmalgamatedProduct::new(
        GroupDescriptor::cyclic("x"),
        GroupDescriptor::cyclic("y"),
        vec![word(&[(0, 2)])],
        vec![word(&[(0, 3)])],
    )
}

fn sides(w: &FreeWord) -> Vec<(Side, FreeWord)> {
    let mut out: Vec<(Side, FreeWord)> = Vec::new();
    for &l in w.letters() {
        let side = if l.index == 0 { Side::A } else { Side::B };
        let piece = FreeWord::new([Gen::new(0, l.inverse)]);
        match out.last_mut() {
            Some((s, p)) if *s == side => *p = p.mul(&piece),
            _ => out.push((side, piece)),
        }
    }
    out
}

fn cyclic_core(w: &FreeWord) -> FreeWord {
    w.cyclic_split().1
}

fn rotations(w: &FreeWord) -> Vec<FreeWord> {
    let l = w.letters();
    (0..l.len().max(1)).map(|k| FreeWord::new(l[k..].iter().chain(&l[..k]).copied())).collect()
}

/// Exact checks of the dictionary and the amalgam's centre pulled back to `⟨g, t⟩`.
pub fn braid_note(alphabet: &Alphabet) -> Result<BraidNote, ProductError> {
    let names = vec![alphabet.coefficients[0].clone(), alphabet.variables[0].clone()];
    let xy = vec!["x".to_string(), "y".to_string()];
    // g = 0, t = 1 on one side; x = 0, y = 1 on the other
    let to_amalgam = [word(&[(1, -1), (0, 1)]), word(&[(0, -1), (1, 2)])];
    let to_braid = [word(&[(0, 1), (1, 1), (0, 1)]), word(&[(0, 1), (1, 1)])];
    let w = word(&[(0, 1), (1, 1), (0, 1), (1, -1), (0, -1), (1, -1)]);
    let ap = torus_knot()?;

    let image = w.substitute(&to_amalgam);
    let nf = afp_normal_form(&ap, &sides(&image))?;
    let relator_maps_to_identity =
        nf.reps.is_empty() && ap.engine_a.is_trivial(&ap.h_image(Side::A, &nf.h)) == Equality::Equal;

    let back = word(&[(0, 2), (1, -3)]).substitute(&to_braid);
    let core = cyclic_core(&back);
    let amalgam_relator_is_conjugate_of_w =
        core.is_empty() || rotations(&w).iter().chain(&rotations(&w.inverse())).any(|r| *r == core);

    let round_trip = (0..2u32).all(|i| {
        let e = FreeWord::gen(i);
        e.substitute(&to_amalgam).substitute(&to_braid) == e && e.substitute(&to_braid).substitute(&to_amalgam) == e
    });

    let c = afp_centre(&ap)?;
    let centre = c
        .generators_in_b
        .first()
        .map(|y| y.relabel(&[1]).substitute(&to_braid).display(&names).to_string())
        .unwrap_or_else(|| "1".into());
    let show = |w: &FreeWord, n: &[String]| w.display(n).to_string();
    let dictionary = vec![
        ("x".into(), show(&to_braid[0], &names)),
        ("y".into(), show(&to_braid[1], &names)),
        (names[0].clone(), show(&to_amalgam[0], &xy)),
        (names[1].clone(), show(&to_amalgam[1], &xy)),
    ];
    let amalgam_centre = c.generators_in_a.iter().map(|x| show(x, &xy[..1])).collect();
    Ok(BraidNote {
        dictionary,
        amalgam_centre,
        centre,
        relator_maps_to_identity,
        amalgam_relator_is_conjugate_of_w,
        round_trip,
    })
}
