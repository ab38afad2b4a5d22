#include "ensp/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ensp/errors.hpp"
#include "ensp/rng.hpp"

namespace ensp {

namespace {

// Flat neighbor lists; much faster to iterate per matvec than the bitset.
struct Csr {
    int n = 0;
    std::vector<int> offset;
    std::vector<int> neigh;

    void matvec(const std::vector<double>& x, std::vector<double>& y) const {
        for (int i = 0; i < n; ++i) {
            double acc = 0.0;
            for (int k = offset[i]; k < offset[i + 1]; ++k) acc += x[neigh[k]];
            y[i] = acc;
        }
    }
};

Csr build_csr(const Graph& g) {
    Csr c;
    c.n = g.n();
    const auto deg = g.degrees();
    c.offset.assign(c.n + 1, 0);
    for (int i = 0; i < c.n; ++i) c.offset[i + 1] = c.offset[i] + deg[i];
    c.neigh.resize(static_cast<std::size_t>(2) * g.edge_count());
    std::vector<int> cursor(c.offset.begin(), c.offset.end() - 1);
    g.for_each_edge([&](int i, int j) {
        c.neigh[cursor[i]++] = j;
        c.neigh[cursor[j]++] = i;
    });
    return c;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

void start_vector(int n, std::vector<double>& x) {
    x.assign(n, 1.0);
    x[0] += 0.5;  // breaks symmetry between balanced bipartite halves
    const double norm = std::sqrt(dot(x, x));
    for (double& v : x) v /= norm;
}

// Sign-varied deterministic start for the deflated iteration. A structured
// start can be exactly orthogonal to the wanted eigenvector (automorphism
// symmetry, or a repeated top eigenvalue already absorbed into v1), and power
// iteration never recovers a missing component.
void hashed_start_vector(int n, std::uint64_t salt, std::vector<double>& x) {
    x.resize(n);
    for (int i = 0; i < n; ++i) {
        const std::uint64_t h = splitmix64(salt + static_cast<std::uint64_t>(i));
        x[i] = static_cast<double>(h >> 11) * 0x1.0p-52 - 1.0;
    }
    const double norm = std::sqrt(dot(x, x));
    for (double& v : x) v /= norm;
}

}  // namespace

EigenResult lambda1_full(const Graph& g, const SpectralOptions& opt) {
    if (g.n() < 1) throw config_error("eigenvalue of an empty vertex set");
    const int n = g.n();
    const auto deg = g.degrees();
    const double shift = static_cast<double>(*std::max_element(deg.begin(), deg.end()));
    const Csr A = build_csr(g);

    EigenResult out;
    std::vector<double> x, y(n);
    start_vector(n, x);
    for (int it = 1; it <= opt.max_iter; ++it) {
        A.matvec(x, y);
        const double lam = dot(x, y);
        double res2 = 0.0;
        for (int i = 0; i < n; ++i) {
            const double d = y[i] - lam * x[i];
            res2 += d * d;
        }
        const double res = std::sqrt(res2);
        out.value = lam;
        out.iterations = it;
        out.residual = res;
        if (res <= opt.tol * std::max(1.0, std::abs(lam))) {
            out.converged = true;
            out.vector = x;
            return out;
        }
        double norm2 = 0.0;
        for (int i = 0; i < n; ++i) {
            y[i] += shift * x[i];
            norm2 += y[i] * y[i];
        }
        const double norm = std::sqrt(norm2);
        for (int i = 0; i < n; ++i) x[i] = y[i] / norm;
    }
    out.vector = x;
    return out;
}

EigenResult lambda2_full(const Graph& g, const EigenResult& top, const SpectralOptions& opt) {
    if (g.n() < 2) throw config_error("lambda2 needs at least 2 vertices");
    const int n = g.n();
    const auto deg = g.degrees();
    const double shift = static_cast<double>(*std::max_element(deg.begin(), deg.end()));
    const std::vector<double>& v1 = top.vector;
    const Csr A = build_csr(g);

    EigenResult out;
    std::vector<double> x, y(n);
    auto project_out_v1 = [&](std::vector<double>& v) {
        const double c = dot(v1, v);
        for (int i = 0; i < n; ++i) v[i] -= c * v1[i];
    };
    double norm = 0.0;
    for (std::uint64_t salt = 0x6a09e667f3bcc909ull; norm < 1e-3; ++salt) {
        hashed_start_vector(n, salt, x);
        project_out_v1(x);
        norm = std::sqrt(dot(x, x));
    }
    for (double& v : x) v /= norm;

    for (int it = 1; it <= opt.max_iter; ++it) {
        A.matvec(x, y);
        const double lam = dot(x, y);
        // residual measured inside the deflated subspace
        const double yv = dot(v1, y);
        double res2 = 0.0;
        for (int i = 0; i < n; ++i) {
            const double d = y[i] - yv * v1[i] - lam * x[i];
            res2 += d * d;
        }
        const double res = std::sqrt(res2);
        out.value = lam;
        out.iterations = it;
        out.residual = res;
        if (res <= opt.tol * std::max(1.0, std::abs(lam))) {
            out.converged = true;
            out.vector = x;
            return out;
        }
        for (int i = 0; i < n; ++i) y[i] += shift * x[i];
        project_out_v1(y);
        double norm2 = dot(y, y);
        if (norm2 <= 0.0) {
            out.converged = true;  // deflated operator annihilated x: lambda2 = -shift
            out.vector = x;
            return out;
        }
        const double inv = 1.0 / std::sqrt(norm2);
        for (int i = 0; i < n; ++i) x[i] = y[i] * inv;
    }
    out.vector = x;
    return out;
}

double lambda1(const Graph& g, double tol) {
    SpectralOptions opt;
    opt.tol = tol;
    return lambda1_full(g, opt).value;
}

double lambda2(const Graph& g, double tol) {
    SpectralOptions opt;
    opt.tol = tol;
    const EigenResult top = lambda1_full(g, opt);
    return lambda2_full(g, top, opt).value;
}

double degree_ratio(const Graph& g) {
    if (g.edge_count() == 0) throw config_error("degree ratio undefined on an edgeless graph");
    const auto deg = g.degrees();
    std::int64_t sum = 0, sum2 = 0;
    for (int k : deg) {
        sum += k;
        sum2 += static_cast<std::int64_t>(k) * k;
    }
    return static_cast<double>(sum2) / static_cast<double>(sum);
}

FkPrediction fk_prediction(int n, double p, double regime_beta) {
    if (p < 0.0 || p > 1.0) throw config_error("p outside [0,1]");
    FkPrediction out;
    out.value = static_cast<double>(n - 1) * p + (1.0 - p);
    const double q = std::sqrt((n - 1) * std::min(p, 1.0 - p));
    const double denom = q * std::sqrt((n - 1) * p);
    out.error_scale = denom > 0.0 ? std::pow(1.0 - p, 1.5) / denom
                                  : std::numeric_limits<double>::infinity();
    if (n >= 2) {
        const double edge = std::pow(std::log(static_cast<double>(n)), regime_beta) /
                            static_cast<double>(n);
        out.regime_ok = (p >= edge) && (p < 1.0 - edge);
    }
    return out;
}

SpectralSummary spectral_summary(const Graph& g, double p, const SpectralOptions& opt) {
    SpectralSummary s;
    const EigenResult top = lambda1_full(g, opt);
    s.lambda1 = top.value;
    s.iterations = top.iterations;
    s.tol_achieved = top.residual;
    if (g.n() >= 2) {
        const EigenResult second = lambda2_full(g, top, opt);
        s.lambda2 = second.value;
        s.iterations += second.iterations;
        s.tol_achieved = std::max(s.tol_achieved, second.residual);
    }
    s.degree_ratio = g.edge_count() > 0 ? degree_ratio(g) : 0.0;
    s.fk_prediction = fk_prediction(g.n(), p).value;
    s.residual = s.degree_ratio - s.lambda1;
    return s;
}

ResidualDecomposition residual_decomposition(const Graph& g, const SpectralOptions& opt) {
    if (g.edge_count() == 0)
        throw config_error("decomposition undefined on an edgeless graph");
    const EigenResult top = lambda1_full(g, opt);
    if (!top.converged)
        throw convergence_error("top eigenvector did not converge", top.residual);
    const int n = g.n();

    ResidualDecomposition d;
    d.lambda1 = top.value;
    double ones_dot_v = 0.0;
    for (double v : top.vector) ones_dot_v += v;
    d.v1.resize(n);
    d.r.resize(n);
    for (int i = 0; i < n; ++i) {
        d.v1[i] = ones_dot_v * top.vector[i];
        d.r[i] = 1.0 - d.v1[i];
    }
    d.r_norm2 = dot(d.r, d.r);
    const Csr A = build_csr(g);
    std::vector<double> ar(n);
    A.matvec(d.r, ar);
    d.ar_norm2 = dot(ar, ar);
    d.cross = dot(d.r, ar);
    const double sum_deg = 2.0 * static_cast<double>(g.edge_count());
    d.residual = (d.ar_norm2 - d.lambda1 * d.cross) / sum_deg;
    return d;
}

double expansion_estimate(const Graph& g, double p, int k_max) {
    if (!(p > 0.0 && p < 1.0)) throw config_error("expansion estimate needs p in (0,1)");
    if (k_max < 0 || k_max > 3) throw config_error("k_max must be in {0,1,2,3}");
    const int n = g.n();
    const double np = static_cast<double>(n) * p;
    const double s = std::sqrt(np / (1.0 - p));
    const double scale = std::sqrt(np * (1.0 - p));
    const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
    const Csr A = build_csr(g);

    // T v = (A v + p v - p (sum v) ones) / scale
    auto apply = [&](const std::vector<double>& v, std::vector<double>& out) {
        A.matvec(v, out);
        double total = 0.0;
        for (double vi : v) total += vi;
        for (int i = 0; i < n; ++i) out[i] = (out[i] + p * v[i] - p * total) / scale;
    };

    std::vector<double> e(n, inv_sqrt_n), u1(n), u2(n);
    double m1 = 0.0, m2 = 0.0;
    if (k_max >= 1) {
        apply(e, u1);
        m1 = dot(e, u1);
    }
    if (k_max >= 2) {
        apply(u1, u2);
        m2 = dot(e, u2);
    }
    double lam = s;
    if (k_max >= 1) lam += m1;
    if (k_max >= 2) lam += (m2 - m1 * m1) / s;
    if (k_max >= 3) lam += (m1 * m1 * m1 - 3.0 * m1 * m2) / (s * s);
    return lam * scale - p;
}

}  // namespace ensp
