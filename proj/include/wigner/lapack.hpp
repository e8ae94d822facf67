#pragma once
#include <Eigen/Dense>

namespace wigner::la {

// dense symmetric/Hermitian eigensolvers (LAPACK dsyevd/zheevd), eigenvalues
// ascending; OpenBLAS is pinned to one thread at load time so results do not
// depend on the machine's thread configuration.
Eigen::VectorXd eigh_values(const Eigen::MatrixXd& A);
Eigen::VectorXd eigh_values(const Eigen::MatrixXcd& A);
void eigh(const Eigen::MatrixXd& A, Eigen::VectorXd& w, Eigen::MatrixXd& V);
void eigh(const Eigen::MatrixXcd& A, Eigen::VectorXd& w, Eigen::MatrixXcd& V);

}  // namespace wigner::la
