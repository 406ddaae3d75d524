//! Dévissage of torsion linking forms over `Z_(p)` and `F_p[u]_(u)`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ribbon::linkform::{
    geq_m_feasible, random_form, random_isotropic, verify_devissage, FpFormClass, LocalIntegers, LocalPolynomials,
    TorsionLinkingForm,
};

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let z3 = LocalIntegers::new(3).unwrap();
    let f = random_form(&z3, 6, &mut rng);
    let d = f.diagonalize().unwrap();
    println!("orders {:?}, diagonal orders {:?}, units {:?}", f.orders(), d.orders, d.unit_residues(&z3));

    let g = random_isotropic(&f, 2, &mut rng);
    let q = f.quotient_form(&g).unwrap();
    let (phi_f, phi_q) = (f.phi_graded().unwrap(), q.phi_graded().unwrap());
    let hyp = FpFormClass::hyperbolic(3);
    let w = geq_m_feasible(&phi_f, &phi_q, &hyp).expect("a quotient is always dominated");
    println!("length {} -> {}, witness h = {:?}, verified {}", f.length(), q.length(), w.h, verify_devissage(&phi_f, &phi_q, &hyp, &w));

    let h = TorsionLinkingForm::hyperbolic(&z3, 2);
    println!("hyperbolic form has a metabolizer: {}", h.find_metabolizer_brute().unwrap().is_some());
    println!("hyperbolic form dominates the trivial form: {}", geq_m_feasible(&h.phi_graded().unwrap(), &Default::default(), &hyp).is_some());

    let fu = LocalPolynomials::new(5).unwrap();
    let p = random_form(&fu, 4, &mut rng);
    println!("over F_5[u]: orders {:?}, Φ {:?}", p.orders(), p.phi_graded().unwrap());
}
