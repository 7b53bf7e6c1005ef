use std::collections::BTreeMap;
use germ_core::algebra::*;
use germ_core::normalform::*;
use germ_core::series::parse_cocycle;

fn main() {
    // §2 example 1: (1/x + y^5/x^3, y/x)
    let c = parse_cocycle("k 1\norder 5\na 3 5 1\n").unwrap();
    let ring = c.ring().extend(&[("alpha", false), ("beta", false), ("gamma", false), ("theta", true)]).unwrap();
    let nf = NormalForm::new(c.embed_by_name(&ring).unwrap()).unwrap();
    let a = ResidualParam::symbolic(&ring).unwrap();
    let acted = act(&a, &nf).unwrap();
    let p = |s: &str| parse_poly(&ring, s).unwrap();
    let g = p("gamma - alpha*beta*theta^2");
    println!("a34 == -(gamma-alpha*beta*theta^2)^2 ? {}", acted.normal_form.a(3,4) == -&g.pow(2));
    let a35 = acted.normal_form.a(3, 5);
    println!("a35 = {}", a35);
    // substitute gamma -> alpha*beta*theta^2
    let gamma_id = ring.id_of("gamma").unwrap();
    let mut b = BTreeMap::new();
    b.insert(gamma_id, p("alpha*beta*theta^2"));
    let a35s = a35.substitute(&b).unwrap();
    println!("a35 mod (gamma - alpha*beta*theta^2) = {}", a35s);
    println!("== theta^5 ? {}", a35s == p("theta^5"));
    let a45s = acted.normal_form.a(4, 5).substitute(&b).unwrap();
    println!("a45 mod = {}", a45s);

    // §2 example 2: (1/x, y/x + (b25/x^2 + b35/x^3 + b45/x^4) y^5), theta = 1
    let c2 = parse_cocycle("k 1\norder 5\nb 2 5 b25\nb 3 5 b35\nb 4 5 b45\n").unwrap();
    let ring2 = c2.ring().extend(&[("alpha", false), ("beta", false), ("gamma", false), ("theta", true)]).unwrap();
    let nf2 = NormalForm::new(c2.embed_by_name(&ring2).unwrap()).unwrap();
    let a2 = ResidualParam::symbolic(&ring2).unwrap();
    let acted2 = act(&a2, &nf2).unwrap();
    let q = |s: &str| parse_poly(&ring2, s).unwrap();
    let theta_id = ring2.id_of("theta").unwrap();
    let gamma_id2 = ring2.id_of("gamma").unwrap();
    let mut slice = BTreeMap::new();
    slice.insert(theta_id, ParamPoly::one(&ring2));
    let a34 = acted2.normal_form.a(3,4).substitute(&slice).unwrap();
    println!("ex2 a34 (theta=1) == -(gamma-alpha*beta)^2 ? {}", a34 == -&q("gamma - alpha*beta").pow(2));
    let mut both = slice.clone();
    both.insert(gamma_id2, q("alpha*beta"));
    let a35b = acted2.normal_form.a(3,5).substitute(&both).unwrap();
    let a45b = acted2.normal_form.a(4,5).substitute(&both).unwrap();
    println!("ex2 a35 (theta=1, gamma=ab) = {}", a35b);
    println!("   == alpha*b35 + beta*b25 ? {}", a35b == q("alpha*b35 + beta*b25"));
    println!("ex2 a45 (theta=1, gamma=ab) = {}", a45b);
    println!("   == alpha*b45 + beta*b35 ? {}", a45b == q("alpha*b45 + beta*b35"));
}
