#include <algorithm>
#include <limits>
#include <random>

#include "feast/enstm.hpp"
#include "feast/error.hpp"

namespace feast {

namespace {

// Guards 0/0 in the update quotients without perturbing normal denominators.
constexpr double kTiny = 1e-300;
// Below this fraction of ||V|| the residual is rounding noise.
constexpr double kResidualFloor = 1e-13;

bool has_negative(const DenseMatrix& V) { return (V.array() < 0.0).any(); }

bool has_negative(const SparseMatrix& V) {
    const double* values = V.valuePtr();
    return std::any_of(values, values + V.nonZeros(), [](double v) { return v < 0.0; });
}

double frobenius(const DenseMatrix& V) { return V.norm(); }
double frobenius(const SparseMatrix& V) { return V.norm(); }

double residual(const DenseMatrix& V, const DenseMatrix& W, const DenseMatrix& H, double /*v_norm*/) {
    return (V - W * H).norm();
}

// ||V - WH||^2 = sum_nnz[(v - p)^2 - p^2] + tr(W'W HH'), which stays sparse.
// Near an exact fit that expansion cancels badly, so recompute densely there.
double residual(const SparseMatrix& V, const DenseMatrix& W, const DenseMatrix& H, double v_norm) {
    double on_support = 0.0;
    for (Eigen::Index i = 0; i < V.outerSize(); ++i) {
        for (SparseMatrix::InnerIterator it(V, i); it; ++it) {
            const double p = W.row(i).dot(H.col(it.col()));
            const double d = it.value() - p;
            on_support += d * d - p * p;
        }
    }
    const double model = ((W.transpose() * W).cwiseProduct(H * H.transpose())).sum();
    const double r2 = on_support + model;
    if (r2 > 1e-6 * v_norm * v_norm) return std::sqrt(r2);
    return (DenseMatrix(V) - W * H).norm();
}

template <typename Matrix>
NmfResult factorize(const Matrix& V, const NmfOptions& options) {
    const Eigen::Index rows = V.rows();
    const Eigen::Index cols = V.cols();
    const int k = options.k;
    if (k < 1 || k > std::min(rows, cols)) {
        throw ParameterError("nmf rank k=" + std::to_string(k) + " outside [1, " +
                             std::to_string(std::min(rows, cols)) + "]");
    }
    if (options.max_iters < 0) throw ParameterError("nmf max_iters must be >= 0");
    if (has_negative(V)) throw ParameterError("nmf input has negative entries");
    const double v_norm = frobenius(V);
    if (v_norm == 0.0) throw DegenerateInputError("nmf input is all zeros");

    NmfResult out;
    out.k = k;
    out.seed = options.seed;
    out.W.resize(rows, k);
    out.H.resize(k, cols);
    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (Eigen::Index i = 0; i < out.W.size(); ++i) out.W.data()[i] = unit(rng);
    for (Eigen::Index i = 0; i < out.H.size(); ++i) out.H.data()[i] = unit(rng);

    DenseMatrix& W = out.W;
    DenseMatrix& H = out.H;
    double previous = residual(V, W, H, v_norm);
    out.residual = previous;

    for (int it = 0; it < options.max_iters; ++it) {
        {
            const DenseMatrix numerator = (V.transpose() * W).transpose();
            const DenseMatrix denominator = (W.transpose() * W) * H;
            H.array() *= numerator.array() / (denominator.array() + kTiny);
        }
        {
            const DenseMatrix numerator = V * H.transpose();
            const DenseMatrix denominator = W * (H * H.transpose());
            W.array() *= numerator.array() / (denominator.array() + kTiny);
        }
        const double current = residual(V, W, H, v_norm);
        out.residual = current;
        out.iterations_run = it + 1;
        if (options.track_residuals) out.residual_trace.push_back(current);

        if (current <= kResidualFloor * v_norm) break;
        if (previous - current < options.tolerance * previous) break;
        previous = current;
    }
    return out;
}

}  // namespace

NmfResult nmf(const SparseMatrix& V, const NmfOptions& options) { return factorize(V, options); }

NmfResult nmf(const DenseMatrix& V, const NmfOptions& options) { return factorize(V, options); }

}  // namespace feast
