#include "helmbem/krylov.hpp"

#include <chrono>
#include <cmath>
#include <fstream>

namespace helmbem {
namespace {

constexpr double kBreakdownTol = 1e-14;

void make_givens(Complex a, Complex b, double& cs, Complex& sn) {
    const double den = std::sqrt(std::norm(a) + std::norm(b));
    if (std::abs(a) == 0.0) {
        cs = 0.0;
        sn = 1.0;
        return;
    }
    cs = std::abs(a) / den;
    sn = (a / std::abs(a)) * std::conj(b) / den;
}

}  // namespace

SolveReport gmres(const DenseComplexMatrix& matrix, const ComplexVector& rhs,
                  const GmresOptions& options) {
    if (matrix.rows() != matrix.cols())
        throw BuildError("gmres needs a square system");
    if (matrix.rows() != rhs.size())
        throw BuildError("gmres right-hand side size mismatch");
    const auto start = std::chrono::steady_clock::now();
    const Eigen::Index n = matrix.rows();
    Eigen::Index max_it = options.max_iterations > 0
                              ? std::min(options.max_iterations, n)
                              : n;

    SolveReport rep;
    rep.solution = ComplexVector::Zero(n);
    const double beta0 = rhs.norm();
    if (beta0 == 0.0) {
        rep.converged = true;
        rep.final_residual = 0.0;
        return rep;
    }

    Eigen::MatrixXcd V(n, max_it + 1);
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(max_it + 1, max_it);
    std::vector<double> givens_c(max_it);
    std::vector<Complex> givens_s(max_it);
    ComplexVector g = ComplexVector::Zero(max_it + 1);
    g[0] = beta0;
    V.col(0) = rhs / beta0;

    Eigen::Index it = 0;
    for (Eigen::Index j = 0; j < max_it; ++j) {
        ComplexVector w = matrix * V.col(j);
        for (Eigen::Index i = 0; i <= j; ++i) {
            const Complex h = V.col(i).dot(w);
            H(i, j) = h;
            w -= h * V.col(i);
        }
        // one re-orthogonalisation pass keeps the basis orthonormal to
        // machine precision over long runs
        for (Eigen::Index i = 0; i <= j; ++i) {
            const Complex c = V.col(i).dot(w);
            H(i, j) += c;
            w -= c * V.col(i);
        }
        const double hnorm = w.norm();
        H(j + 1, j) = hnorm;

        for (Eigen::Index i = 0; i < j; ++i) {
            const Complex t = givens_c[i] * H(i, j) + givens_s[i] * H(i + 1, j);
            H(i + 1, j) =
                -std::conj(givens_s[i]) * H(i, j) + givens_c[i] * H(i + 1, j);
            H(i, j) = t;
        }
        make_givens(H(j, j), H(j + 1, j), givens_c[j], givens_s[j]);
        H(j, j) = givens_c[j] * H(j, j) + givens_s[j] * H(j + 1, j);
        H(j + 1, j) = 0.0;
        g[j + 1] = -std::conj(givens_s[j]) * g[j];
        g[j] = givens_c[j] * g[j];

        it = j + 1;
        rep.residual_history.push_back(std::abs(g[j + 1]) / beta0);
        if (hnorm < kBreakdownTol) {
            rep.breakdown = true;
            break;
        }
        V.col(j + 1) = w / hnorm;
        if (rep.residual_history.back() <= options.tolerance) break;
    }
    rep.iterations = it;

    // back-substitute the Givens-reduced least squares problem
    ComplexVector y = ComplexVector::Zero(it);
    for (Eigen::Index i = it - 1; i >= 0; --i) {
        Complex s = g[i];
        for (Eigen::Index k = i + 1; k < it; ++k) s -= H(i, k) * y[k];
        y[i] = s / H(i, i);
    }
    rep.solution = V.leftCols(it) * y;
    rep.final_residual = (rhs - matrix * rep.solution).norm() / beta0;
    rep.converged = !rep.residual_history.empty() &&
                    rep.residual_history.back() <= options.tolerance;
    if (options.capture_basis) rep.basis = V.leftCols(it);
    rep.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    return rep;
}

SolveReport gmres(const BlockSystem& system, const GmresOptions& options) {
    return gmres(system.matrix, system.rhs, options);
}

void dump_residual_csv(const SolveReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "iteration,residual\n";
    char buf[64];
    for (std::size_t i = 0; i < report.residual_history.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%zu,%.17g\n", i + 1,
                      report.residual_history[i]);
        out << buf;
    }
}

}  // namespace helmbem
