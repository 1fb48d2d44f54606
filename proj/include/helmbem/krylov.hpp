#pragma once

#include <string>
#include <vector>

#include "helmbem/formulations.hpp"
#include "helmbem/types.hpp"

namespace helmbem {

struct GmresOptions {
    double tolerance = 1e-8;
    Eigen::Index max_iterations = 0;  // 0 -> system dimension
    bool capture_basis = false;       // keep the Arnoldi basis in the report
};

struct SolveReport {
    ComplexVector solution;
    Eigen::Index iterations = 0;
    std::vector<double> residual_history;  // relative to ||b||, non-increasing
    bool converged = false;
    bool breakdown = false;    // Arnoldi norm fell under 1e-14
    double final_residual = 0.0;  // true ||b - A y|| / ||b|| of the returned y
    double wall_seconds = 0.0;
    Eigen::MatrixXcd basis;    // filled only when capture_basis
};

/// Unrestarted GMRES with zero initial guess: modified Gram-Schmidt Arnoldi
/// with one re-orthogonalisation pass and Givens-rotation least squares.
/// Returns at the first iteration with relative residual <= tolerance.
SolveReport gmres(const DenseComplexMatrix& matrix, const ComplexVector& rhs,
                  const GmresOptions& options = {});

SolveReport gmres(const BlockSystem& system, const GmresOptions& options = {});

/// Residual history export: "iteration,residual" rows.
void dump_residual_csv(const SolveReport& report, const std::string& path);

}  // namespace helmbem
