#include "qspectra/hull.hpp"

#include "qspectra/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace qspectra {

namespace {

using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

CMat to_cmat(const GaussMatrix& g)
{
    CMat m(static_cast<Eigen::Index>(g.rows()), static_cast<Eigen::Index>(g.cols()));
    for (std::size_t r = 0; r < g.rows(); ++r)
        for (std::size_t c = 0; c < g.cols(); ++c)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = {g.re(r, c).get_d(), g.im(r, c).get_d()};
    return m;
}

CMat combine(const std::vector<CMat>& mats, const std::vector<double>& x)
{
    CMat m = mats[0];
    for (std::size_t i = 0; i < x.size(); ++i) m += x[i] * mats[i + 1];
    return m;
}

double min_eigenvalue(const CMat& m)
{
    Eigen::SelfAdjointEigenSolver<CMat> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

std::size_t numeric_rank(const CMat& m, double tol)
{
    Eigen::SelfAdjointEigenSolver<CMat> es(m, Eigen::EigenvaluesOnly);
    double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
    std::size_t r = 0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
        if (std::abs(es.eigenvalues()(i)) > tol * scale) ++r;
    return r;
}

std::vector<CMat> hull_matrices(const HullParametrization& h)
{
    std::vector<CMat> mats{to_cmat(h.base_matrix())};
    for (std::size_t i = 0; i < h.dimension(); ++i) mats.push_back(to_cmat(h.direction_matrix(i)));
    return mats;
}

// Real linear map dx -> vec(sum_i dx_i A_i N), stacked as real and imaginary parts.
RMat face_map(const std::vector<CMat>& mats, const CMat& kernel)
{
    const Eigen::Index m = static_cast<Eigen::Index>(mats.size()) - 1;
    const Eigen::Index blk = kernel.rows() * kernel.cols();
    RMat L(2 * blk, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        CMat b = mats[static_cast<std::size_t>(i) + 1] * kernel;
        Eigen::Map<const CVec> flat(b.data(), blk);
        L.col(i).head(blk) = flat.real();
        L.col(i).tail(blk) = flat.imag();
    }
    return L;
}

CMat kernel_of(const CMat& m, double tol)
{
    Eigen::SelfAdjointEigenSolver<CMat> es(m);
    double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
    std::vector<Eigen::Index> cols;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
        if (es.eigenvalues()(i) < tol * scale) cols.push_back(i);
    CMat k(m.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j) k.col(static_cast<Eigen::Index>(j)) = es.eigenvectors().col(cols[j]);
    return k;
}

Eigen::Index real_rank(const RMat& m, double tol)
{
    if (m.cols() == 0) return 0;
    if (m.rows() == 0) return 0;
    Eigen::JacobiSVD<RMat> svd(m);
    const auto& sv = svd.singularValues();
    double scale = std::max(1.0, sv.size() ? sv(0) : 0.0);
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > tol * scale) ++r;
    return r;
}

ExtremePoint make_point(const HullParametrization& h, const std::vector<CMat>& mats, const std::vector<double>& x)
{
    ExtremePoint p;
    p.parameters = x;
    p.v = h.at(x);
    p.rank = numeric_rank(combine(mats, x), 1e-9);
    return p;
}

// Attempts an exact rational version of a real point; verified in exact arithmetic.
void try_exact(const HullParametrization& h, ExtremePoint& p)
{
    if (!h.is_real()) return;
    ExactVector xs;
    for (double x : p.parameters) {
        auto r = rational_approximation(x, 100000, 1e-9);
        if (!r) return;
        xs.push_back(*r);
    }
    GaussVector v = h.at(xs);
    ExactMatrix m = associated_matrix(v, h.letters).re;
    if (!is_psd_symmetric(m)) return;
    p.exact = v.re;
    p.exact_parameters = xs;
    p.rank = rank(m);
}

bool same_point(const std::vector<double>& a, const std::vector<double>& b, double tol)
{
    double d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d <= tol;
}

// ---- exact one-parameter hulls ----

using Poly = std::vector<Rational>;  // ascending coefficients

Rational eval(const Poly& p, const Rational& x)
{
    Rational acc = 0;
    for (std::size_t i = p.size(); i-- > 0;) acc = acc * x + p[i];
    return acc;
}

long double eval_ld(const std::vector<long double>& p, long double x)
{
    long double acc = 0;
    for (std::size_t i = p.size(); i-- > 0;) acc = acc * x + p[i];
    return acc;
}

struct Candidate {
    double x;
    std::optional<Rational> exact;
};

std::vector<Candidate> real_roots(const Poly& poly)
{
    Poly p = poly;
    while (!p.empty() && sgn(p.back()) == 0) p.pop_back();
    std::vector<Candidate> out;
    if (p.size() <= 1) return out;
    // Factor out x^m.
    std::size_t low = 0;
    while (sgn(p[low]) == 0) ++low;
    if (low > 0) out.push_back({0.0, Rational(0)});
    Poly q(p.begin() + static_cast<std::ptrdiff_t>(low), p.end());
    const std::size_t deg = q.size() - 1;
    if (deg == 0) return out;
    std::vector<long double> ld;
    for (const auto& c : q) ld.push_back(static_cast<long double>(c.get_d()));
    RMat comp = RMat::Zero(static_cast<Eigen::Index>(deg), static_cast<Eigen::Index>(deg));
    double lead = q.back().get_d();
    for (std::size_t i = 0; i < deg; ++i) {
        comp(0, static_cast<Eigen::Index>(deg - 1 - i)) = -q[i].get_d() / lead;
        if (i + 1 < deg) comp(static_cast<Eigen::Index>(i + 1), static_cast<Eigen::Index>(i)) = 1.0;
    }
    Eigen::EigenSolver<RMat> es(comp, false);
    std::vector<long double> dld;
    for (std::size_t i = 1; i < ld.size(); ++i) dld.push_back(ld[i] * static_cast<long double>(i));
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        auto z = es.eigenvalues()(i);
        if (std::abs(z.imag()) > 1e-6 * (1.0 + std::abs(z.real()))) continue;
        long double x = z.real();
        for (int it = 0; it < 50; ++it) {
            long double d = eval_ld(dld, x);
            if (d == 0) break;
            long double step = eval_ld(ld, x) / d;
            x -= step;
            if (std::fabs(static_cast<double>(step)) < 1e-18) break;
        }
        Candidate c{static_cast<double>(x), std::nullopt};
        if (auto r = rational_approximation(c.x, 10000000, 1e-7)) {
            if (sgn(eval(q, *r)) == 0) {
                c.exact = *r;
                c.x = r->get_d();
            }
        }
        out.push_back(c);
    }
    return out;
}

HullResult exact_one_parameter(const HullParametrization& h)
{
    if (h.dimension() != 1 || !h.is_real()) {
        throw InputError("exact-1d needs exactly one real hull parameter; this hull has dimension " +
                         std::to_string(h.dimension()) + (h.is_real() ? "" : " with complex parameters"));
    }
    ExactMatrix a0 = h.base_matrix().re;
    ExactMatrix a1 = h.direction_matrix(0).re;
    const std::size_t s = a0.rows();
    // Interpolate each principal-minor sum E_k(x), degree <= s, from s+1 samples.
    ExactMatrix vander(s + 1, s + 1);
    ExactMatrix samples(s + 1, s + 1);
    for (std::size_t t = 0; t <= s; ++t) {
        Rational x(static_cast<long>(t));
        Rational pw = 1;
        for (std::size_t j = 0; j <= s; ++j) {
            vander(t, j) = pw;
            pw *= x;
        }
        auto e = principal_minor_sums(a0 + a1.scaled(x));
        for (std::size_t k = 0; k <= s; ++k) samples(t, k) = e[k];
    }
    auto coeffs = solve(vander, samples);
    if (!coeffs) throw NumericalError("interpolation system is singular");
    std::vector<Poly> polys;
    for (std::size_t k = 1; k <= s; ++k) polys.push_back(coeffs->column(k));

    auto feasible_exact = [&](const Rational& x) {
        for (const auto& p : polys)
            if (sgn(eval(p, x)) < 0) return false;
        return true;
    };
    std::vector<CMat> mats = hull_matrices(h);
    auto feasible = [&](const Candidate& c) {
        if (c.exact) return feasible_exact(*c.exact);
        return min_eigenvalue(combine(mats, {c.x})) >= -1e-9;
    };

    std::vector<Candidate> cands;
    for (const auto& p : polys)
        for (auto& c : real_roots(p)) cands.push_back(c);
    std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) { return a.x < b.x; });
    std::vector<Candidate> merged;
    for (const auto& c : cands) {
        if (!merged.empty() && std::abs(merged.back().x - c.x) <= 1e-9 * (1.0 + std::abs(c.x))) {
            if (!merged.back().exact && c.exact) merged.back() = c;
            continue;
        }
        merged.push_back(c);
    }
    if (merged.empty()) throw NumericalError("spectral hull has no boundary along its parameter");
    auto outside = [&](const Rational& x) { return feasible_exact(x); };
    Rational lo_probe = Rational(merged.front().exact ? *merged.front().exact : Rational(merged.front().x)) - 1;
    Rational hi_probe = Rational(merged.back().exact ? *merged.back().exact : Rational(merged.back().x)) + 1;
    if (outside(lo_probe) || outside(hi_probe)) throw NumericalError("spectral hull is unbounded along its parameter");

    std::vector<std::size_t> ok;
    for (std::size_t i = 0; i < merged.size(); ++i)
        if (feasible(merged[i])) ok.push_back(i);
    if (ok.empty()) throw NumericalError("no feasible boundary point found for the spectral hull");

    HullResult res;
    res.method = HullMethod::Exact1D;
    std::vector<std::size_t> ends{ok.front()};
    if (ok.back() != ok.front()) ends.push_back(ok.back());
    // Convexity: every sample strictly between the ends must be feasible.
    for (std::size_t i = ok.front(); i + 1 <= ok.back(); ++i) {
        Rational l = merged[i].exact ? *merged[i].exact : Rational(merged[i].x);
        Rational r = merged[i + 1].exact ? *merged[i + 1].exact : Rational(merged[i + 1].x);
        if (!feasible_exact((l + r) / 2)) throw NumericalError("feasible set along the hull parameter is not an interval");
    }
    for (auto i : ends) {
        const Candidate& c = merged[i];
        ExtremePoint p = make_point(h, mats, {c.x});
        if (c.exact) {
            GaussVector v = h.at(ExactVector{*c.exact});
            p.exact = v.re;
            p.exact_parameters = ExactVector{*c.exact};
            p.rank = rank(associated_matrix(v, h.letters).re);
        } else {
            res.exact = false;
            res.notes.push_back("endpoint " + std::to_string(c.x) + " is irrational; reported in floating point");
        }
        res.points.push_back(std::move(p));
    }
    return res;
}

// ---- commuting hulls: eigenvalue polyhedron ----

std::optional<HullResult> commutative_hull(const HullParametrization& h, std::uint64_t seed, double tol)
{
    std::vector<GaussMatrix> g{h.base_matrix()};
    for (std::size_t i = 0; i < h.dimension(); ++i) g.push_back(h.direction_matrix(i));
    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t j = i + 1; j < g.size(); ++j)
            if (!(g[i] * g[j] == g[j] * g[i])) return std::nullopt;

    std::vector<CMat> mats = hull_matrices(h);
    const std::size_t m = h.dimension();
    const Eigen::Index n = mats[0].rows();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.5, 1.5);
    RMat mu;  // mu(j, i): eigenvalue of matrix i on joint eigenvector j
    bool found = false;
    for (int attempt = 0; attempt < 8 && !found; ++attempt) {
        CMat comb = CMat::Zero(n, n);
        for (const auto& a : mats) comb += unif(rng) * a;
        Eigen::SelfAdjointEigenSolver<CMat> es(comb);
        const CMat& x = es.eigenvectors();
        mu = RMat(n, static_cast<Eigen::Index>(mats.size()));
        found = true;
        for (Eigen::Index j = 0; j < n && found; ++j) {
            for (std::size_t i = 0; i < mats.size(); ++i) {
                CVec ax = mats[i] * x.col(j);
                std::complex<double> lam = x.col(j).dot(ax);
                double scale = 1.0 + mats[i].cwiseAbs().maxCoeff();
                if ((ax - lam * x.col(j)).norm() > 1e-8 * scale) {
                    found = false;
                    break;
                }
                mu(j, static_cast<Eigen::Index>(i)) = lam.real();
            }
        }
    }
    if (!found) return std::nullopt;

    // Constraints b_j + a_j . x >= 0.
    // Eigenvalues below the noise floor are exact zeros.
    const double floor = 1e-10 * std::max(1.0, mu.cwiseAbs().maxCoeff());
    mu = mu.unaryExpr([floor](double v) { return std::abs(v) < floor ? 0.0 : v; });
    std::vector<RVec> rows;
    for (Eigen::Index j = 0; j < n; ++j) {
        RVec r = mu.row(j).transpose();
        double nrm = r.norm();
        if (nrm == 0) continue;
        r /= nrm;
        if (r.tail(static_cast<Eigen::Index>(m)).norm() < 1e-12) {
            if (r(0) < -tol) throw NumericalError("spectral hull is empty");
            continue;
        }
        bool dup = std::any_of(rows.begin(), rows.end(), [&](const RVec& o) { return (o - r).norm() < 1e-9; });
        if (!dup) rows.push_back(r);
    }
    HullResult res;
    res.method = HullMethod::CommutativeExact;
    if (m == 0) {
        res.points.push_back(make_point(h, mats, {}));
        return res;
    }
    // Enumerate vertices: m linearly independent active constraints.
    const std::size_t R = rows.size();
    double combos = 1;
    for (std::size_t i = 0; i < m; ++i) combos = combos * static_cast<double>(R - i) / static_cast<double>(i + 1);
    if (R < m || combos > 2e6) return std::nullopt;
    std::vector<std::size_t> pick(m);
    std::iota(pick.begin(), pick.end(), 0);
    std::vector<std::vector<double>> verts;
    while (true) {
        RMat a(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
        RVec b(static_cast<Eigen::Index>(m));
        for (std::size_t i = 0; i < m; ++i) {
            a.row(static_cast<Eigen::Index>(i)) = rows[pick[i]].tail(static_cast<Eigen::Index>(m)).transpose();
            b(static_cast<Eigen::Index>(i)) = -rows[pick[i]](0);
        }
        Eigen::FullPivLU<RMat> lu(a);
        lu.setThreshold(1e-10);
        if (lu.rank() == static_cast<Eigen::Index>(m)) {
            RVec x = lu.solve(b);
            bool feasible = true;
            for (const auto& r : rows)
                if (r(0) + r.tail(static_cast<Eigen::Index>(m)).dot(x) < -1e-9) {
                    feasible = false;
                    break;
                }
            if (feasible) {
                std::vector<double> xv(x.data(), x.data() + x.size());
                bool dup = std::any_of(verts.begin(), verts.end(), [&](const auto& o) { return same_point(o, xv, 1e-7); });
                if (!dup) verts.push_back(xv);
            }
        }
        // Next combination.
        std::size_t i = m;
        while (i > 0 && pick[i - 1] == R - m + (i - 1)) --i;
        if (i == 0) break;
        ++pick[i - 1];
        for (std::size_t k = i; k < m; ++k) pick[k] = pick[k - 1] + 1;
    }
    std::sort(verts.begin(), verts.end());
    for (const auto& x : verts) {
        ExtremePoint p = make_point(h, mats, x);
        try_exact(h, p);
        if (!p.exact) res.exact = false;
        res.points.push_back(std::move(p));
    }
    if (verts.empty()) throw NumericalError("eigenvalue polyhedron has no vertices");
    return res;
}

// ---- numeric search: log-det barrier over random linear objectives ----

struct Barrier {
    std::vector<CMat> f;  // f[0] + sum_i z_i f[i+1]

    bool value(const RVec& z, const RVec& c, double eta, double& out) const
    {
        CMat m = f[0];
        for (Eigen::Index i = 0; i < z.size(); ++i) m += z(i) * f[static_cast<std::size_t>(i) + 1];
        Eigen::LLT<CMat> llt(m);
        if (llt.info() != Eigen::Success) return false;
        double logdet = 0;
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            double d = llt.matrixL()(i, i).real();
            if (!(d > 0)) return false;
            logdet += 2.0 * std::log(d);
        }
        out = eta * c.dot(z) - logdet;
        return std::isfinite(out);
    }

    RVec minimize(RVec z, const RVec& c, double eta) const
    {
        const Eigen::Index n = z.size();
        for (int it = 0; it < 200; ++it) {
            CMat m = f[0];
            for (Eigen::Index i = 0; i < n; ++i) m += z(i) * f[static_cast<std::size_t>(i) + 1];
            Eigen::LLT<CMat> llt(m);
            if (llt.info() != Eigen::Success) break;
            std::vector<CMat> g(static_cast<std::size_t>(n));
            RVec grad(n);
            for (Eigen::Index i = 0; i < n; ++i) {
                g[static_cast<std::size_t>(i)] = llt.solve(f[static_cast<std::size_t>(i) + 1]);
                grad(i) = eta * c(i) - g[static_cast<std::size_t>(i)].trace().real();
            }
            RMat hess(n, n);
            for (Eigen::Index i = 0; i < n; ++i)
                for (Eigen::Index j = i; j < n; ++j) {
                    double v = (g[static_cast<std::size_t>(i)] * g[static_cast<std::size_t>(j)]).trace().real();
                    hess(i, j) = hess(j, i) = v;
                }
            hess += 1e-14 * (1.0 + hess.diagonal().cwiseAbs().maxCoeff()) * RMat::Identity(n, n);
            RVec step = -hess.ldlt().solve(grad);
            double decrement = -grad.dot(step);
            if (!(decrement > 1e-20)) break;
            double f0;
            if (!value(z, c, eta, f0)) break;
            double t = 1.0;
            double f1;
            while (t > 1e-16) {
                RVec zt = z + t * step;
                if (value(zt, c, eta, f1) && f1 <= f0 - 0.25 * t * decrement) break;
                t *= 0.5;
            }
            if (t <= 1e-16) break;
            z += t * step;
            if (decrement < 1e-18) break;
        }
        return z;
    }
};

std::vector<double> polish_vertex(const std::vector<CMat>& mats, const std::vector<double>& x, bool& polished)
{
    polished = false;
    const std::size_t m = x.size();
    CMat a = combine(mats, x);
    CMat kernel = kernel_of(a, 1e-6);
    if (kernel.cols() == 0) return x;
    RMat L = face_map(mats, kernel);
    CMat rhs_c = -(mats[0] * kernel);
    const Eigen::Index blk = rhs_c.rows() * rhs_c.cols();
    Eigen::Map<const CVec> flat(rhs_c.data(), blk);
    RVec rhs(2 * blk);
    rhs.head(blk) = flat.real();
    rhs.tail(blk) = flat.imag();
    if (real_rank(L, 1e-9) < static_cast<Eigen::Index>(m)) return x;
    RVec sol = L.colPivHouseholderQr().solve(rhs);
    if ((L * sol - rhs).norm() > 1e-7 * (1.0 + rhs.norm())) return x;
    std::vector<double> xs(sol.data(), sol.data() + sol.size());
    double dist = 0, nrm = 0;
    for (std::size_t i = 0; i < m; ++i) {
        dist = std::max(dist, std::abs(xs[i] - x[i]));
        nrm = std::max(nrm, std::abs(x[i]));
    }
    if (dist > 1e-3 * (1.0 + nrm)) return x;
    if (min_eigenvalue(combine(mats, xs)) < -1e-8) return x;
    polished = true;
    return xs;
}

HullResult numeric_hull(const HullParametrization& h, const NumericHullOptions& opt)
{
    std::vector<CMat> mats = hull_matrices(h);
    const std::size_t m = h.dimension();
    HullResult res;
    res.method = HullMethod::Numeric;
    res.complete = false;
    res.exact = false;
    if (m == 0) {
        res.points.push_back(make_point(h, mats, {}));
        res.complete = true;
        return res;
    }
    // Facial reduction: drop the common kernel of the affine family.
    const Eigen::Index n = mats[0].rows();
    CMat stacked(n * static_cast<Eigen::Index>(mats.size()), n);
    for (std::size_t i = 0; i < mats.size(); ++i) stacked.middleRows(static_cast<Eigen::Index>(i) * n, n) = mats[i];
    Eigen::JacobiSVD<CMat> svd(stacked, Eigen::ComputeFullV);
    double smax = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
    Eigen::Index keep = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > 1e-10 * std::max(1.0, smax)) ++keep;
    CMat U = svd.matrixV().leftCols(keep);
    std::vector<CMat> reduced;
    for (const auto& a : mats) reduced.push_back(U.adjoint() * a * U);

    // Phase one: maximize t subject to A(x) - t I >= 0.
    Barrier p1;
    p1.f = reduced;
    p1.f.push_back(-CMat::Identity(keep, keep));
    RVec z = RVec::Zero(static_cast<Eigen::Index>(m) + 1);
    {
        std::vector<double> x0(m, 0.0);
        z(static_cast<Eigen::Index>(m)) = min_eigenvalue(combine(reduced, x0)) - 1.0;
    }
    RVec c1 = RVec::Zero(static_cast<Eigen::Index>(m) + 1);
    c1(static_cast<Eigen::Index>(m)) = -1.0;
    double scale = 1.0;
    for (const auto& a : reduced) scale = std::max(scale, a.cwiseAbs().maxCoeff());
    bool interior = false;
    for (double eta = 1.0; eta < 1e12; eta *= 10.0) {
        z = p1.minimize(z, c1, eta);
        if (z(static_cast<Eigen::Index>(m)) > 1e-4 * scale) {
            interior = true;
            break;
        }
    }
    if (!interior) {
        res.notes.push_back("no strictly feasible point after facial reduction; search abandoned");
        return res;
    }
    RVec x_int = z.head(static_cast<Eigen::Index>(m));

    Barrier p2;
    p2.f = reduced;
    std::mt19937_64 rng(opt.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::size_t objectives = opt.objectives ? opt.objectives : 24 + 12 * m;
    std::vector<RVec> dirs;
    for (std::size_t i = 0; i < m; ++i) {
        RVec e = RVec::Zero(static_cast<Eigen::Index>(m));
        e(static_cast<Eigen::Index>(i)) = 1.0;
        dirs.push_back(e);
        dirs.push_back(-e);
    }
    while (dirs.size() < objectives + 2 * m) {
        RVec d(static_cast<Eigen::Index>(m));
        for (Eigen::Index i = 0; i < d.size(); ++i) d(i) = normal(rng);
        dirs.push_back(d / d.norm());
    }
    std::vector<std::vector<double>> found;
    std::vector<bool> polished_flags;
    std::size_t last_new = 0;
    for (std::size_t k = 0; k < dirs.size(); ++k) {
        RVec c = -dirs[k];
        RVec x = x_int;
        for (double eta = 1.0; eta < 1e13; eta *= 8.0) {
            x = p2.minimize(x, c, eta);
            if (static_cast<double>(keep) / eta < 1e-11) break;
        }
        std::vector<double> xv(x.data(), x.data() + x.size());
        bool polished = false;
        xv = polish_vertex(mats, xv, polished);
        if (!is_extreme(h, xv, 1e-6)) continue;
        bool dup = std::any_of(found.begin(), found.end(), [&](const auto& o) { return same_point(o, xv, 1e-6); });
        if (dup) continue;
        found.push_back(xv);
        polished_flags.push_back(polished);
        last_new = k + 1;
    }
    std::vector<std::size_t> order(found.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return found[a] < found[b]; });
    for (auto i : order) {
        ExtremePoint p = make_point(h, mats, found[i]);
        p.vertex_polished = polished_flags[i];
        try_exact(h, p);
        res.points.push_back(std::move(p));
    }
    res.exact = !res.points.empty() && std::all_of(res.points.begin(), res.points.end(),
                                                     [](const ExtremePoint& p) { return p.exact.has_value(); });
    res.notes.push_back("numeric search: " + std::to_string(found.size()) + " extreme points from " +
                        std::to_string(dirs.size()) + " objectives, last new point at objective " +
                        std::to_string(last_new) + "; completeness not certified");
    return res;
}

// ---- user candidates ----

HullResult candidate_hull(const HullParametrization& h, const std::vector<ExactVector>& candidates)
{
    HullResult res;
    res.method = HullMethod::Candidates;
    res.complete = false;
    if (candidates.empty()) throw InputError("the candidates method needs at least one candidate vector");
    const std::size_t n = h.letters * h.letters;
    const std::size_t m = h.dimension();
    std::vector<CMat> mats = hull_matrices(h);
    for (std::size_t ci = 0; ci < candidates.size(); ++ci) {
        const ExactVector& v = candidates[ci];
        std::string tag = "candidate " + std::to_string(ci + 1);
        if (v.size() != n) throw InputError(tag + ": expected " + std::to_string(n) + " entries, found " + std::to_string(v.size()));
        // Solve base + D x = v over the stacked real and imaginary parts.
        ExactMatrix aug(2 * n, m + 1);
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t i = 0; i < m; ++i) {
                aug(r, i) = h.directions[i].re[r];
                aug(n + r, i) = h.directions[i].im[r];
            }
            aug(r, m) = v[r] - h.base.re[r];
            aug(n + r, m) = -h.base.im[r];
        }
        ExactMatrix red = aug;
        auto piv = rref(red);
        if (!piv.empty() && piv.back() == m) {
            res.notes.push_back(tag + " rejected: not a normalized self-adjoint Q-eigenvector");
            continue;
        }
        ExactVector x = zero_vector(m);
        for (std::size_t i = 0; i < piv.size(); ++i) x[piv[i]] = red(i, m);
        GaussVector gv = h.at(x);
        ExactMatrix vm = associated_matrix(gv, h.letters).re;
        if (!gv.is_real() || !is_psd_symmetric(vm)) {
            res.notes.push_back(tag + " rejected: associated matrix is not positive semidefinite");
            continue;
        }
        std::vector<double> xd;
        for (const auto& xi : x) xd.push_back(xi.get_d());
        // Exact face test: directions that annihilate the kernel of the associated matrix.
        ExactMatrix ker = nullspace(vm);
        ExactMatrix face(ker.rows() * ker.cols() * 2, m);
        for (std::size_t i = 0; i < m; ++i) {
            GaussMatrix dm = h.direction_matrix(i);
            ExactMatrix pr = dm.re * ker, pi = dm.im * ker;
            std::size_t row = 0;
            for (std::size_t a = 0; a < pr.rows(); ++a)
                for (std::size_t b = 0; b < pr.cols(); ++b) {
                    face(row, i) = pr(a, b);
                    face(row + pr.rows() * pr.cols(), i) = pi(a, b);
                    ++row;
                }
        }
        if (rank(face) < m) {
            res.notes.push_back(tag + " rejected: member of the hull but not extreme");
            continue;
        }
        ExtremePoint p = make_point(h, mats, xd);
        p.exact = gv.re;
        p.exact_parameters = x;
        p.rank = rank(vm);
        res.points.push_back(std::move(p));
        res.notes.push_back(tag + " accepted: verified extreme point");
    }
    res.notes.push_back("candidate verification does not establish completeness");
    return res;
}

}  // namespace

ComplexVector GaussVector::to_complex() const
{
    ComplexVector out(re.size());
    for (std::size_t i = 0; i < re.size(); ++i) out[i] = {re[i].get_d(), im.empty() ? 0.0 : im[i].get_d()};
    return out;
}

std::string describe(const HullParameter& p)
{
    switch (p.kind) {
    case ParameterKind::Real: return "real(class " + std::to_string(p.class_id) + ")";
    case ParameterKind::RealPart:
        return "re(class " + std::to_string(p.class_id) + " ~ class " + std::to_string(p.partner) + ")";
    case ParameterKind::ImagPart:
        return "im(class " + std::to_string(p.class_id) + " ~ class " + std::to_string(p.partner) + ")";
    }
    return "";
}

std::vector<std::size_t> transpose_pairing(const ErgodicDecomposition& bi, std::size_t s)
{
    std::vector<std::size_t> pairing(bi.classes.size());
    for (std::size_t c = 0; c < bi.classes.size(); ++c) {
        std::optional<std::size_t> target;
        for (Letter ab : bi.classes[c]) {
            Letter ba = static_cast<Letter>((ab % s) * s + ab / s);
            auto t = bi.class_of(ba);
            if (!t || (target && *t != *target)) {
                throw std::logic_error("transpose of an ergodic class is not a single class");
            }
            target = t;
        }
        pairing[c] = *target;
    }
    return pairing;
}

bool HullParametrization::is_real() const
{
    if (!base.is_real()) return false;
    return std::all_of(directions.begin(), directions.end(), [](const GaussVector& d) { return d.is_real(); });
}

GaussMatrix associated_matrix(const GaussVector& v, std::size_t s)
{
    GaussMatrix m(s, s);
    for (std::size_t a = 0; a < s; ++a)
        for (std::size_t b = 0; b < s; ++b) {
            m.re(a, b) = v.re[a * s + b];
            if (!v.im.empty()) m.im(a, b) = v.im[a * s + b];
        }
    return m;
}

GaussMatrix HullParametrization::base_matrix() const { return associated_matrix(base, letters); }

GaussMatrix HullParametrization::direction_matrix(std::size_t i) const
{
    return associated_matrix(directions.at(i), letters);
}

GaussVector HullParametrization::at(const ExactVector& x) const
{
    GaussVector v = base;
    for (std::size_t i = 0; i < x.size(); ++i) {
        v.re = add(v.re, scaled(directions[i].re, x[i]));
        v.im = add(v.im, scaled(directions[i].im, x[i]));
    }
    return v;
}

ComplexVector HullParametrization::at(const std::vector<double>& x) const
{
    ComplexVector v = base.to_complex();
    for (std::size_t i = 0; i < x.size(); ++i) {
        ComplexVector d = directions[i].to_complex();
        for (std::size_t k = 0; k < v.size(); ++k) v[k] += x[i] * d[k];
    }
    return v;
}

HullParametrization hull_parametrization(const Substitution& s, const ErgodicDecomposition& bi, const ExactVector& u)
{
    const std::size_t letters = s.size();
    const std::size_t n = letters * letters;
    if (bi.index != 1) {
        throw InputError("bisubstitution has index " + std::to_string(bi.index) + "; telescope the substitution first");
    }
    if (u.size() != letters) throw InputError("letter-frequency vector has the wrong length");
    HullParametrization h;
    h.letters = letters;
    h.Q = Rational(static_cast<unsigned long>(s.Q()));
    h.bi = bi;
    h.u = u;
    h.pairing = transpose_pairing(bi, letters);
    for (std::size_t c = 0; c < bi.classes.size(); ++c) {
        std::size_t p = h.pairing[c];
        if (p == c) {
            h.parameters.push_back({c, c, ParameterKind::Real});
        } else if (c < p) {
            h.parameters.push_back({c, p, ParameterKind::RealPart});
            h.parameters.push_back({c, p, ParameterKind::ImagPart});
        }
    }
    const std::size_t P = h.parameters.size();
    // Class-constant part V_E of each parameter, real and imaginary columns.
    ExactMatrix vre(n, P), vim(n, P);
    for (std::size_t k = 0; k < P; ++k) {
        const auto& prm = h.parameters[k];
        for (Letter ab : bi.classes[prm.class_id]) {
            if (prm.kind == ParameterKind::ImagPart) vim(ab, k) = 1;
            else vre(ab, k) = 1;
        }
        if (prm.kind != ParameterKind::Real) {
            for (Letter ab : bi.classes[prm.partner]) {
                if (prm.kind == ParameterKind::ImagPart) vim(ab, k) = -1;
                else vre(ab, k) = 1;
            }
        }
    }
    ExactMatrix ct = coincidence_matrix(s).transpose();
    std::vector<bool> transient(n, false);
    for (Letter t : bi.transient) transient[t] = true;
    ExactMatrix lop = ExactMatrix::identity(n).scaled(h.Q) - ct;
    ExactMatrix x = ExactMatrix::identity(n).scaled(h.Q);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c)
            if (transient[c]) x(r, c) -= ct(r, c);
    auto tre = solve(x, (lop * vre).scaled(-1));
    auto tim = solve(x, (lop * vim).scaled(-1));
    if (!tre || !tim) throw NumericalError("transient system of the spectral hull is singular");
    ExactMatrix wre = vre + *tre, wim = vim + *tim;

    std::vector<Rational> norm(P);
    for (std::size_t k = 0; k < P; ++k) {
        Rational acc = 0, acc_im = 0;
        for (Letter a = 0; a < letters; ++a) {
            acc += u[a] * wre(a * letters + a, k);
            acc_im += u[a] * wim(a * letters + a, k);
        }
        if (sgn(acc_im) != 0) throw std::logic_error("normalization picked up an imaginary part");
        norm[k] = acc;
    }
    std::optional<std::size_t> pivot;
    for (std::size_t k = 0; k < P && !pivot; ++k)
        if (sgn(norm[k]) != 0 && h.parameters[k].kind != ParameterKind::ImagPart) pivot = k;
    if (!pivot) throw NumericalError("normalization does not involve any hull parameter");
    h.pivot = *pivot;
    ExactVector pre = wre.column(*pivot), pim = wim.column(*pivot);
    h.base = GaussVector{scaled(pre, 1 / norm[*pivot]), scaled(pim, 1 / norm[*pivot])};
    for (std::size_t k = 0; k < P; ++k) {
        if (k == *pivot) continue;
        Rational f = norm[k] / norm[*pivot];
        h.free_parameters.push_back(h.parameters[k]);
        h.directions.push_back(GaussVector{subtract(wre.column(k), scaled(pre, f)), subtract(wim.column(k), scaled(pim, f))});
    }
    return h;
}

std::string to_string(HullMethod m)
{
    switch (m) {
    case HullMethod::Auto: return "auto";
    case HullMethod::Exact1D: return "exact-1d";
    case HullMethod::CommutativeExact: return "commutative-exact";
    case HullMethod::Numeric: return "numeric";
    case HullMethod::Candidates: return "candidates";
    }
    return "auto";
}

std::optional<HullMethod> parse_hull_method(const std::string& text)
{
    if (text == "auto") return HullMethod::Auto;
    if (text == "exact-1d") return HullMethod::Exact1D;
    if (text == "commutative-exact") return HullMethod::CommutativeExact;
    if (text == "numeric") return HullMethod::Numeric;
    if (text == "candidates" || text == "verify-candidates") return HullMethod::Candidates;
    return std::nullopt;
}

HullResult extreme_points(const HullParametrization& h, HullMethod method, const std::vector<ExactVector>& candidates,
                          const NumericHullOptions& options)
{
    if (h.dimension() == 0 && method != HullMethod::Candidates) {
        HullResult res;
        res.method = method;
        ExtremePoint p = make_point(h, hull_matrices(h), {});
        if (h.base.is_real()) {
            p.exact = h.base.re;
            p.exact_parameters = ExactVector{};
        } else {
            res.exact = false;
        }
        res.points.push_back(std::move(p));
        res.notes.push_back("hull is a single point");
        return res;
    }
    switch (method) {
    case HullMethod::Exact1D: return exact_one_parameter(h);
    case HullMethod::CommutativeExact: {
        auto r = commutative_hull(h, options.seed, options.tolerance);
        if (!r) throw InputError("commutative-exact needs mutually commuting hull matrices");
        return *r;
    }
    case HullMethod::Numeric: return numeric_hull(h, options);
    case HullMethod::Candidates: return candidate_hull(h, candidates);
    case HullMethod::Auto: break;
    }
    if (h.dimension() == 1 && h.is_real()) return exact_one_parameter(h);
    if (auto r = commutative_hull(h, options.seed, options.tolerance)) return *r;
    return numeric_hull(h, options);
}

MembershipReport verify_membership(const ExactMatrix& coincidence, const Rational& Q, const ExactVector& u,
                                   const ExactVector& v)
{
    const std::size_t s = u.size();
    if (v.size() != s * s) throw InputError("membership vector has the wrong length");
    MembershipReport r;
    r.exact = true;
    r.eigenvector = coincidence.transpose() * v == scaled(v, Q);
    Rational total = 0;
    for (std::size_t a = 0; a < s; ++a) total += u[a] * v[a * s + a];
    r.normalized = total == 1;
    ExactMatrix m = associated_matrix(GaussVector{v, zero_vector(v.size())}, s).re;
    r.positive_semidefinite = is_psd_symmetric(m);
    r.rank = rank(m);
    CMat cm = to_cmat(GaussMatrix(m));
    r.min_eigenvalue = (m == m.transpose()) ? min_eigenvalue(cm) : -1.0;
    return r;
}

MembershipReport verify_membership(const ExactMatrix& coincidence, const Rational& Q, const ExactVector& u,
                                   const ComplexVector& v, double tolerance)
{
    const std::size_t s = u.size();
    const std::size_t n = s * s;
    if (v.size() != n) throw InputError("membership vector has the wrong length");
    MembershipReport r;
    const double q = Q.get_d();
    double err = 0, scale = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::complex<double> acc = 0;
        for (std::size_t k = 0; k < n; ++k)
            if (sgn(coincidence(k, c)) != 0) acc += coincidence(k, c).get_d() * v[k];
        err = std::max(err, std::abs(acc - q * v[c]));
        scale = std::max(scale, std::abs(v[c]));
    }
    r.eigenvector = err <= tolerance * q * scale;
    std::complex<double> total = 0;
    for (std::size_t a = 0; a < s; ++a) total += u[a].get_d() * v[a * s + a];
    r.normalized = std::abs(total - 1.0) <= tolerance;
    CMat m(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(s));
    double herm = 0;
    for (std::size_t a = 0; a < s; ++a)
        for (std::size_t b = 0; b < s; ++b) {
            m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = v[a * s + b];
            herm = std::max(herm, std::abs(v[a * s + b] - std::conj(v[b * s + a])));
        }
    r.min_eigenvalue = min_eigenvalue(0.5 * (m + m.adjoint()));
    r.positive_semidefinite = herm <= tolerance * scale && r.min_eigenvalue >= -tolerance * scale;
    r.rank = numeric_rank(m, tolerance);
    return r;
}

bool is_extreme(const HullParametrization& h, const std::vector<double>& x, double tolerance)
{
    std::vector<CMat> mats = hull_matrices(h);
    if (x.empty()) return true;
    CMat a = combine(mats, x);
    if (min_eigenvalue(a) < -1e-7) return false;
    CMat kernel = kernel_of(a, tolerance);
    if (kernel.cols() == 0) return false;
    return real_rank(face_map(mats, kernel), 1e-8) == static_cast<Eigen::Index>(x.size());
}

}  // namespace qspectra
