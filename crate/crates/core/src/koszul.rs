//! Koszul sign rules. Every function returns `true` for a minus sign.

/// `(−1)^{|a||b|}` for interchanging `a` and `b`.
pub fn swap(a: usize, b: usize) -> bool {
    a % 2 == 1 && b % 2 == 1
}

/// Sign of the permutation of graded symbols of the given degrees that sorts
/// them by `order` (a stable key per symbol).
pub fn permutation_sign(degrees: &[usize], order: &[usize]) -> bool {
    let mut odd = false;
    for i in 0..degrees.len() {
        for j in i + 1..degrees.len() {
            if order[i] > order[j] && swap(degrees[i], degrees[j]) {
                odd = !odd;
            }
        }
    }
    odd
}

/// `(f′⊗g′)∘(f⊗g) = (−1)^{|g′||f|} (f′∘f)⊗(g′∘g)`.
pub fn box_compose(g_prime: usize, f: usize) -> bool {
    swap(g_prime, f)
}

/// `(β⊗η)∘(α⊗ω) = (−1)^{|η||α|} (β∘α)⊗(η·ω)`.
pub fn path_compose(eta: usize, alpha: usize) -> bool {
    swap(eta, alpha)
}

/// `Hom(f⊗g)(α) = (−1)^{|f|(|g|+|α|)} g∘α∘f`.
pub fn internal_hom(f: usize, g: usize, alpha: usize) -> bool {
    f % 2 == 1 && (g + alpha) % 2 == 1
}

/// `d(x_l ⊗ ⋯ ⊗ x_1)` picks up `(−1)^{|x_l|+⋯+|x_{i+1}|}` at factor `i`.
pub fn leibniz(prefix_degree: usize) -> bool {
    prefix_degree % 2 == 1
}

pub fn to_i64(negative: bool) -> i64 {
    if negative {
        -1
    } else {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        assert!(internal_hom(1, 0, 1));
        assert!(!internal_hom(1, 1, 1));
        assert!(!internal_hom(0, 1, 1));
        assert!(path_compose(1, 1));
        assert!(!path_compose(2, 1));
        assert!(box_compose(3, 1));
        // x(1) y(1) z(2) sorted to z x y: z passes two odd symbols
        assert!(!permutation_sign(&[1, 1, 2], &[1, 2, 0]));
        // x(1) y(1) -> y x
        assert!(permutation_sign(&[1, 1], &[1, 0]));
        assert_eq!(to_i64(true), -1);
    }

    #[test]
    fn permutation_sign_is_multiplicative() {
        // sorting [3,1,2,0] in one step equals sorting via [1,3,0,2]
        let degs = [1, 1, 1, 2];
        let direct = permutation_sign(&degs, &[3, 1, 2, 0]);
        let step1 = permutation_sign(&degs, &[1, 0, 2, 3]);
        let after = [1, 1, 1, 2];
        let step2 = permutation_sign(&after, &[1, 3, 2, 0]);
        assert_eq!(direct, step1 ^ step2);
    }
}
