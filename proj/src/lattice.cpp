#include "periodica/lattice.hpp"

#include <mpfr.h>

#include <algorithm>
#include <functional>
#include <utility>

#include "periodica/error.hpp"
#include "periodica/intfactor.hpp"
#include "periodica/numerics.hpp"
#include "periodica/qpoly.hpp"

namespace periodica {

namespace {

long bitsize(const ZZ& z) {
    return z == 0 ? 0 : static_cast<long>(mpz_sizeinbase(z.get_mpz_t(), 2));
}

bool lex_less(const std::vector<ZZ>& a, const std::vector<ZZ>& b) {
    for (size_t i = 0; i < a.size(); ++i) {
        int c = cmp(a[i], b[i]);
        if (c != 0) return c < 0;
    }
    return false;
}

}  // namespace

IntegerLatticeBasis approximate_kernel(const std::vector<std::vector<Real>>& M,
                                       const PrecisionContext& ctx, long keep_bits) {
    const long m = static_cast<long>(M.size());
    const long n = m > 0 ? static_cast<long>(M[0].size()) : 0;
    if (keep_bits < 0) keep_bits = ctx.working_bits / 4;
    IntegerLatticeBasis result;
    result.dim = n;
    if (n == 0) return result;

    // Entries are trusted to 2^-(B - G); scaling by 2^(B - G - 1) makes the
    // rounding error at most one half.
    const long shift = ctx.working_bits - ctx.guard_bits - 1;
    IntegerLatticeBasis stacked;
    stacked.dim = n + m;
    stacked.columns.assign(static_cast<size_t>(n), std::vector<ZZ>(static_cast<size_t>(n + m)));
    Real scaled(ctx.prec());
    for (long j = 0; j < n; ++j) {
        auto& col = stacked.columns[static_cast<size_t>(j)];
        col[static_cast<size_t>(j)] = 1;
        for (long i = 0; i < m; ++i) {
            mpfr_mul_2si(scaled.get(), M[static_cast<size_t>(i)][static_cast<size_t>(j)].get(), shift,
                         MPFR_RNDN);
            if (!scaled.is_finite()) throw InternalError("kernel matrix entry is not finite");
            mpfr_get_z(col[static_cast<size_t>(n + i)].get_mpz_t(), scaled.get(), MPFR_RNDN);
        }
    }

    LLLResult red = lll_reduce(stacked);

    std::vector<std::vector<ZZ>> kept;
    const ZZ resid_cap(n);
    for (const auto& col : red.basis.columns) {
        bool ok = true;
        for (long i = 0; ok && i < n; ++i)
            if (bitsize(col[static_cast<size_t>(i)]) > keep_bits) ok = false;
        for (long i = 0; ok && i < m; ++i)
            if (abs(col[static_cast<size_t>(n + i)]) > resid_cap) ok = false;
        if (ok) kept.emplace_back(col.begin(), col.begin() + n);
    }
    if (kept.empty()) return result;

    ZMat rows(static_cast<long>(kept.size()), n);
    for (long r = 0; r < rows.rows; ++r)
        for (long c = 0; c < n; ++c) rows.at(r, c) = kept[static_cast<size_t>(r)][static_cast<size_t>(c)];
    ZMat h = hnf(rows);
    result.columns.assign(static_cast<size_t>(h.rows), std::vector<ZZ>(static_cast<size_t>(n)));
    for (long r = 0; r < h.rows; ++r)
        for (long c = 0; c < n; ++c) result.columns[static_cast<size_t>(r)][static_cast<size_t>(c)] = h.at(r, c);
    return result;
}

std::vector<ShortVector> fincke_pohst(const QMat& gram, const QQ& bound) {
    const long n = gram.rows;
    if (gram.cols != n) throw InternalError("gram matrix must be square");
    for (long i = 0; i < n; ++i)
        for (long j = i + 1; j < n; ++j)
            if (gram.at(i, j) != gram.at(j, i)) throw InternalError("gram matrix must be symmetric");

    // Exact Cholesky G = R^T D R with R unit upper triangular.
    std::vector<std::vector<QQ>> R(static_cast<size_t>(n), std::vector<QQ>(static_cast<size_t>(n)));
    std::vector<QQ> d(static_cast<size_t>(n));
    for (long i = 0; i < n; ++i) {
        QQ di = gram.at(i, i);
        for (long l = 0; l < i; ++l)
            di -= d[static_cast<size_t>(l)] * R[static_cast<size_t>(l)][static_cast<size_t>(i)] *
                  R[static_cast<size_t>(l)][static_cast<size_t>(i)];
        if (di <= 0) throw NotPositiveDefinite("gram matrix is not positive definite");
        d[static_cast<size_t>(i)] = di;
        for (long j = i + 1; j < n; ++j) {
            QQ v = gram.at(i, j);
            for (long l = 0; l < i; ++l)
                v -= d[static_cast<size_t>(l)] * R[static_cast<size_t>(l)][static_cast<size_t>(i)] *
                     R[static_cast<size_t>(l)][static_cast<size_t>(j)];
            R[static_cast<size_t>(i)][static_cast<size_t>(j)] = v / di;
        }
    }

    std::vector<ShortVector> out;
    if (bound < 0) return out;
    std::vector<ZZ> v(static_cast<size_t>(n));

    // Depth-first over coordinates n-1 .. 0; at each level the admissible
    // values form a contiguous range scanned outward from the center, so the
    // exact inequality alone prunes completely.
    std::function<void(long, const QQ&)> descend = [&](long level, const QQ& remaining) {
        if (level < 0) {
            out.push_back({v, bound - remaining});
            return;
        }
        QQ c;
        for (long j = level + 1; j < n; ++j)
            c += R[static_cast<size_t>(level)][static_cast<size_t>(j)] * QQ(v[static_cast<size_t>(j)]);
        QQ center = -c + QQ(1, 2);
        ZZ t0;
        mpz_fdiv_q(t0.get_mpz_t(), center.get_num_mpz_t(), center.get_den_mpz_t());
        const QQ& dl = d[static_cast<size_t>(level)];
        for (ZZ t = t0;; ++t) {
            QQ off = QQ(t) + c;
            QQ q = dl * off * off;
            if (q > remaining) break;
            v[static_cast<size_t>(level)] = t;
            descend(level - 1, remaining - q);
        }
        for (ZZ t = t0 - 1;; --t) {
            QQ off = QQ(t) + c;
            QQ q = dl * off * off;
            if (q > remaining) break;
            v[static_cast<size_t>(level)] = t;
            descend(level - 1, remaining - q);
        }
        v[static_cast<size_t>(level)] = 0;
    };
    descend(n - 1, bound);

    std::sort(out.begin(), out.end(),
              [](const ShortVector& a, const ShortVector& b) { return lex_less(a.v, b.v); });
    return out;
}

std::vector<ShortVector> fincke_pohst(const ZMat& gram, long bound) {
    return fincke_pohst(QMat(gram), QQ(bound));
}

namespace {

Cplx eval_zpoly(const std::vector<ZZ>& coeffs, const Cplx& z, mpfr_prec_t prec) {
    Cplx acc(prec);
    Real cr(prec);
    for (size_t k = coeffs.size(); k-- > 0;) {
        mpfr_set_z(cr.get(), coeffs[k].get_mpz_t(), MPFR_RNDN);
        acc = acc * z;
        acc.re += cr;
    }
    return acc;
}

}  // namespace

std::optional<AlgebraicCandidate> algebraize(const Cplx& z, int max_degree,
                                             const PrecisionContext& ctx, double residual_factor,
                                             double height_factor) {
    const mpfr_prec_t P = ctx.prec();
    const Real resid_bound =
        Real::pow2(-static_cast<long>(residual_factor * static_cast<double>(ctx.working_bits)), P);
    const long height_bits =
        std::max<long>(1, static_cast<long>(height_factor * static_cast<double>(ctx.working_bits)));

    std::vector<Cplx> pw;
    pw.push_back(Cplx(1, P));
    for (int d = 1; d <= max_degree; ++d) {
        pw.push_back(pw.back() * z);
        std::vector<std::vector<Real>> M(2, std::vector<Real>(static_cast<size_t>(d) + 1, Real(P)));
        for (int k = 0; k <= d; ++k) {
            M[0][static_cast<size_t>(k)] = pw[static_cast<size_t>(k)].re;
            M[1][static_cast<size_t>(k)] = pw[static_cast<size_t>(k)].im;
        }
        IntegerLatticeBasis kern = approximate_kernel(M, ctx);
        for (const auto& cvec : kern.columns) {
            std::vector<mpq_class> qc(cvec.begin(), cvec.end());
            QPoly p(std::move(qc));
            if (p.degree() < 1) continue;
            if (!(abs(eval_zpoly(cvec, z, P)) < resid_bound)) continue;

            // The relation may be reducible; the minimal polynomial is the
            // irreducible factor that actually vanishes at z.
            std::vector<ZZ> best;
            Real best_res(P);
            for (const QFactor& f : factor_q(p)) {
                if (f.poly.degree() < 1) continue;
                std::vector<ZZ> ic = primitive_z(f.poly);
                Real res = abs(eval_zpoly(ic, z, P));
                if (best.empty() || res < best_res) {
                    best = std::move(ic);
                    best_res = res;
                }
            }
            if (best.empty() || !(best_res < resid_bound)) continue;
            bool small = true;
            for (const ZZ& c : best)
                if (bitsize(c) > height_bits) small = false;
            if (!small) continue;

            ComplexPoly cp;
            cp.coeff.assign(best.size(), Cplx(P));
            for (size_t k = 0; k < best.size(); ++k)
                mpfr_set_z(cp.coeff[k].re.get(), best[k].get_mpz_t(), MPFR_RNDN);
            std::vector<Cplx> rts = roots(cp, ctx);
            int idx = 0;
            Real dist(P);
            for (size_t r = 0; r < rts.size(); ++r) {
                Real dr = abs(rts[r] - z);
                if (r == 0 || dr < dist) {
                    dist = dr;
                    idx = static_cast<int>(r);
                }
            }
            AlgebraicCandidate cand;
            cand.min_poly = std::move(best);
            cand.root_index = idx;
            cand.residual = best_res;
            return cand;
        }
    }
    return std::nullopt;
}

}  // namespace periodica
