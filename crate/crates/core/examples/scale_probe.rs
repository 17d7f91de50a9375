use pbwforge_core::scalar::Field;
use pbwforge_core::exterior::{ext_zero, increasing_subsets};
use pbwforge_core::wedgedef::{gen_jacobi_check, jacobi_check, SmallRationals};

fn main() {
    let field = Field::rational();
    let subs2 = increasing_subsets(6, 2);
    let idx = |a: u8, b: u8| subs2.iter().position(|s| s == &vec![a, b]).unwrap();
    let mut cands: Vec<(&str, Vec<Vec<pbwforge_core::FieldElement>>)> = Vec::new();
    { // sl2 + abelian: [h,e]=2e, [h,f]=-2f, [e,f]=h on e1=h,e2=e,e3=f
      let mut l = ext_zero(subs2.len(), 6, &field);
      l[idx(0,1)][1] = field.from_int(2);
      l[idx(0,2)][2] = field.from_int(-2);
      l[idx(1,2)][0] = field.one();
      cands.push(("sl2+ab", l));
    }
    { let mut l = ext_zero(subs2.len(), 6, &field); l[idx(0,1)][1] = field.one(); cands.push(("solv", l)); }
    let mut gen = SmallRationals::new(3);
    for (name, l) in &cands {
        assert!(jacobi_check(6, l, &field), "{}", name);
        let mut fail_single = 0;
        for k in 0..subs2.len() {
            let mut phi = vec![field.zero(); subs2.len()];
            phi[k] = field.one();
            if !gen_jacobi_check(6, l, 2, &phi, &field) { fail_single += 1; }
        }
        let mut fail_rand = 0;
        for _ in 0..30 {
            let phi: Vec<_> = (0..subs2.len()).map(|_| gen.small(&field)).collect();
            if !gen_jacobi_check(6, l, 2, &phi, &field) { fail_rand += 1; }
        }
        println!("{}: single-pair fails {}/15, random fails {}/30", name, fail_single, fail_rand);
    }
}
