#include "bsvi/regression.hpp"

#include <cmath>

#include "bsvi/errors.hpp"

namespace bsvi {

double PolyPredictor::operator()(double x) const {
    const double z = (x - mean_) / scale_;
    double acc = 0.0;
    for (std::size_t k = coeffs_.size(); k-- > 0;) acc = acc * z + coeffs_[k];
    if (extra_) acc += extra_coeff_ * (extra_(x) - extra_mean_) / extra_scale_;
    return acc;
}

namespace {

// Cholesky solve of the n x n normal equations; returns false when the
// matrix is not positive definite within pivot tolerance.
bool cholesky_solve(std::vector<double>& a, std::vector<double>& b, int n) {
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            double s = a[i * n + j];
            for (int k = 0; k < j; ++k) s -= a[i * n + k] * a[j * n + k];
            if (i == j) {
                if (s <= 1e-13 * (1.0 + std::fabs(a[i * n + i]))) return false;
                a[i * n + i] = std::sqrt(s);
            } else {
                a[i * n + j] = s / a[j * n + j];
            }
        }
    }
    for (int i = 0; i < n; ++i) {
        double s = b[i];
        for (int k = 0; k < i; ++k) s -= a[i * n + k] * b[k];
        b[i] = s / a[i * n + i];
    }
    for (int i = n - 1; i >= 0; --i) {
        double s = b[i];
        for (int k = i + 1; k < n; ++k) s -= a[k * n + i] * b[k];
        b[i] = s / a[i * n + i];
    }
    return true;
}

}  // namespace

PolyPredictor regress_condexp(std::span<const double> state, std::span<const double> target,
                              int degree, double ridge,
                              const std::function<double(double)>& extra) {
    if (degree < 1) throw ConfigError("regress_condexp: degree must be >= 1");
    if (ridge < 0.0) throw ConfigError("regress_condexp: ridge must be >= 0");
    if (state.size() != target.size())
        throw ConfigError("regress_condexp: state/target size mismatch");
    const std::size_t n = state.size();
    if (n <= static_cast<std::size_t>(degree) + 2)
        throw ConfigError("regress_condexp: need more samples than the basis size");

    double mean = 0.0;
    for (double x : state) mean += x;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double x : state) var += (x - mean) * (x - mean);
    var /= static_cast<double>(n);
    const double scale = std::sqrt(var);

    PolyPredictor pred;
    pred.mean_ = mean;

    if (scale < 1e-12 * (1.0 + std::fabs(mean))) {
        // Constant state: conditional expectation is the plain mean.
        double tmean = 0.0;
        for (double y : target) tmean += y;
        pred.scale_ = 1.0;
        pred.coeffs_ = {tmean / static_cast<double>(n)};
        return pred;
    }
    pred.scale_ = scale;

    // Optional extra feature, standardized; dropped when (near-)constant
    // since the intercept already spans it.
    std::vector<double> g;
    bool use_extra = false;
    double gmean = 0.0, gscale = 1.0;
    if (extra) {
        g.resize(n);
        for (std::size_t s = 0; s < n; ++s) {
            g[s] = extra(state[s]);
            gmean += g[s];
        }
        gmean /= static_cast<double>(n);
        double gvar = 0.0;
        for (double v : g) gvar += (v - gmean) * (v - gmean);
        gvar /= static_cast<double>(n);
        gscale = std::sqrt(gvar);
        use_extra = gscale > 1e-12 * (1.0 + std::fabs(gmean));
    }

    const int np = degree + 1;
    const int nb = np + (use_extra ? 1 : 0);
    std::vector<double> gram(static_cast<std::size_t>(nb) * nb, 0.0);
    std::vector<double> rhs(nb, 0.0);
    std::vector<double> basis(nb);
    for (std::size_t s = 0; s < n; ++s) {
        const double z = (state[s] - mean) / scale;
        basis[0] = 1.0;
        for (int k = 1; k < np; ++k) basis[k] = basis[k - 1] * z;
        if (use_extra) basis[np] = (g[s] - gmean) / gscale;
        for (int i = 0; i < nb; ++i) {
            for (int j = 0; j <= i; ++j) gram[i * nb + j] += basis[i] * basis[j];
            rhs[i] += basis[i] * target[s];
        }
    }
    for (int i = 0; i < nb; ++i)
        for (int j = i + 1; j < nb; ++j) gram[i * nb + j] = gram[j * nb + i];
    const double dn = static_cast<double>(n);
    for (int i = 0; i < nb * nb; ++i) gram[i] /= dn;
    for (int i = 0; i < nb; ++i) {
        rhs[i] /= dn;
        gram[i * nb + i] += ridge;
    }
    if (!cholesky_solve(gram, rhs, nb)) {
        throw DegenerateRegressionError(
            "regress_condexp: rank-deficient normal equations; consider ridge > 0");
    }
    if (use_extra) {
        pred.extra_ = extra;
        pred.extra_mean_ = gmean;
        pred.extra_scale_ = gscale;
        pred.extra_coeff_ = rhs[np];
        rhs.resize(np);
    }
    pred.coeffs_ = std::move(rhs);
    return pred;
}

}  // namespace bsvi
