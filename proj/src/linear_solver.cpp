// SPDX-License-Identifier: Apache-2.0
#include <cmath>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>

#include "hhowave/timestep.hpp"

namespace hhowave {

void SolverConfig::validate() const
{
    if (!(tolerance > 0))
        throw ConfigError("solver tolerance must be positive");
    if (max_iterations < 1)
        throw ConfigError("solver iteration limit must be positive");
}

SolverConfig::Kind solver_kind_from_string(const std::string& s)
{
    if (s == "direct" || s == "direct-lu" || s == "lu")
        return SolverConfig::Kind::direct;
    if (s == "bicgstab-ilu0" || s == "iterative" || s == "bicgstab")
        return SolverConfig::Kind::bicgstab_ilu0;
    throw ConfigError("unknown solver kind '" + s + "'");
}

const char* to_string(SolverConfig::Kind k)
{
    return k == SolverConfig::Kind::direct ? "direct" : "bicgstab-ilu0";
}

void Ilu0::factor(SparseMatrix m)
{
    m.makeCompressed();
    const int n = static_cast<int>(m.rows());
    info_ = Eigen::Success;
    diag_.assign(n, -1);
    const int* outer = m.outerIndexPtr();
    const int* inner = m.innerIndexPtr();
    double* val = m.valuePtr();
    for (int i = 0; i < n; ++i)
        for (int p = outer[i]; p < outer[i + 1]; ++p)
            if (inner[p] == i)
                diag_[i] = p;

    std::vector<int> marker(n, -1);
    for (int i = 0; i < n; ++i) {
        if (diag_[i] < 0) {
            info_ = Eigen::NumericalIssue;
            break;
        }
        for (int p = outer[i]; p < outer[i + 1]; ++p)
            marker[inner[p]] = p;
        for (int p = outer[i]; p < outer[i + 1] && inner[p] < i; ++p) {
            const int k = inner[p];
            val[p] /= val[diag_[k]];
            const double lik = val[p];
            for (int q = diag_[k] + 1; q < outer[k + 1]; ++q) {
                const int pos = marker[inner[q]];
                if (pos >= 0)
                    val[pos] -= lik * val[q];
            }
        }
        for (int p = outer[i]; p < outer[i + 1]; ++p)
            marker[inner[p]] = -1;
        if (val[diag_[i]] == 0.0 || !std::isfinite(val[diag_[i]])) {
            info_ = Eigen::NumericalIssue;
            break;
        }
    }
    lu_ = std::move(m);
}

Vector Ilu0::solve(const Vector& b) const
{
    const int n = static_cast<int>(lu_.rows());
    const int* outer = lu_.outerIndexPtr();
    const int* inner = lu_.innerIndexPtr();
    const double* val = lu_.valuePtr();
    Vector x = b;
    for (int i = 0; i < n; ++i)
        for (int p = outer[i]; p < diag_[i]; ++p)
            x[i] -= val[p] * x[inner[p]];
    for (int i = n - 1; i >= 0; --i) {
        for (int p = diag_[i] + 1; p < outer[i + 1]; ++p)
            x[i] -= val[p] * x[inner[p]];
        x[i] /= val[diag_[i]];
    }
    return x;
}

struct LinearSolver::Impl {
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    Eigen::BiCGSTAB<SparseMatrix, Ilu0> krylov;
};

LinearSolver::LinearSolver(const SolverConfig& cfg, SparseMatrix a) : cfg_(cfg), a_(std::move(a)), impl_(new Impl)
{
    cfg_.validate();
    if (a_.rows() != a_.cols())
        throw SolverError("linear operator is not square");
    a_.makeCompressed();
    if (cfg_.kind == SolverConfig::Kind::direct) {
        Eigen::SparseMatrix<double> colmajor = a_;
        impl_->lu.analyzePattern(colmajor);
        impl_->lu.factorize(colmajor);
        if (impl_->lu.info() != Eigen::Success)
            throw SolverError("sparse LU factorization failed: " + impl_->lu.lastErrorMessage());
    }
    else {
        impl_->krylov.setTolerance(cfg_.tolerance);
        impl_->krylov.setMaxIterations(cfg_.max_iterations);
        impl_->krylov.compute(a_);
        if (impl_->krylov.preconditioner().info() != Eigen::Success)
            throw SolverError("ILU(0) factorization hit a zero pivot");
    }
}

LinearSolver::~LinearSolver() = default;
LinearSolver::LinearSolver(LinearSolver&&) noexcept = default;
LinearSolver& LinearSolver::operator=(LinearSolver&&) noexcept = default;

Vector LinearSolver::solve(const Vector& rhs) const
{
    if (rhs.size() != a_.rows())
        throw SolverError("right-hand side size mismatch");
    if (rhs.size() == 0)
        return rhs;
    if (cfg_.kind == SolverConfig::Kind::direct) {
        Vector x = impl_->lu.solve(rhs);
        if (impl_->lu.info() != Eigen::Success || !x.allFinite())
            throw SolverError("sparse LU solve failed");
        last_iterations_ = 0;
        return x;
    }
    if (rhs.squaredNorm() == 0.0) {
        last_iterations_ = 0;
        return Vector::Zero(rhs.size());
    }
    Vector x = impl_->krylov.solve(rhs);
    last_iterations_ = static_cast<int>(impl_->krylov.iterations());
    if (impl_->krylov.info() != Eigen::Success || !x.allFinite()) {
        const double rel = (a_ * x - rhs).norm() / rhs.norm();
        throw SolverError("BiCGSTAB did not converge (iterations " + std::to_string(last_iterations_)
                          + ", relative residual " + std::to_string(rel) + ")");
    }
    return x;
}

Vector solve_linear(const SolverConfig& cfg, const SparseMatrix& a, const Vector& rhs)
{
    return LinearSolver(cfg, a).solve(rhs);
}

} // namespace hhowave
