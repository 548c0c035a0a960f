use crate::expr::Jet;

/// `ξ^i = F^i_j V^j`.
pub fn structure_field_jets(f: &[Jet], v: &[Jet]) -> Vec<Jet> {
    let n = v.len();
    (0..n)
        .map(|i| {
            let mut s = Jet::zero(v[0].dim());
            for j in 0..n {
                s = &s + &(&f[i * n + j] * &v[j]);
            }
            s
        })
        .collect()
}

/// `ω_i = g_{ik} ξ^k`.
pub fn dual_form_jets(g: &[Jet], xi: &[Jet]) -> Vec<Jet> {
    let n = xi.len();
    (0..n)
        .map(|i| {
            let mut s = Jet::zero(xi[0].dim());
            for k in 0..n {
                s = &s + &(&g[i * n + k] * &xi[k]);
            }
            s
        })
        .collect()
}

/// Component jets of `α(g_{ij} + ω_i ω_j)` with `ω = g(·, FV)`.
pub fn deformed_metric_jets(g: &[Jet], f: &[Jet], v: &[Jet], alpha: &Jet) -> Vec<Jet> {
    let n = v.len();
    let xi = structure_field_jets(f, v);
    let omega = dual_form_jets(g, &xi);
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let b = &g[i * n + j] + &(&omega[i] * &omega[j]);
            out.push(alpha * &b);
        }
    }
    out
}
