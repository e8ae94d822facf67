#include "wigner/lapack.hpp"

#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "wigner/errors.hpp"

extern "C" void openblas_set_num_threads(int);

namespace wigner::la {

namespace {
// keep BLAS single-threaded: bitwise reproducibility independent of host;
// program-level parallelism happens at the sample level instead
struct BlasPin {
    BlasPin() { openblas_set_num_threads(1); }
} blas_pin;
}  // namespace

Eigen::VectorXd eigh_values(const Eigen::MatrixXd& A) {
    Eigen::MatrixXd work = A;
    Eigen::VectorXd w(A.rows());
    lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'N', 'L', A.rows(),
                                     work.data(), A.rows(), w.data());
    if (info != 0) throw numeric_error("dsyevd failed, info=" + std::to_string(info));
    return w;
}

Eigen::VectorXd eigh_values(const Eigen::MatrixXcd& A) {
    Eigen::MatrixXcd work = A;
    Eigen::VectorXd w(A.rows());
    lapack_int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'N', 'L', A.rows(),
                                     work.data(), A.rows(), w.data());
    if (info != 0) throw numeric_error("zheevd failed, info=" + std::to_string(info));
    return w;
}

void eigh(const Eigen::MatrixXd& A, Eigen::VectorXd& w, Eigen::MatrixXd& V) {
    V = A;
    w.resize(A.rows());
    lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', A.rows(),
                                     V.data(), A.rows(), w.data());
    if (info != 0) throw numeric_error("dsyevd failed, info=" + std::to_string(info));
}

void eigh(const Eigen::MatrixXcd& A, Eigen::VectorXd& w, Eigen::MatrixXcd& V) {
    V = A;
    w.resize(A.rows());
    lapack_int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'L', A.rows(),
                                     V.data(), A.rows(), w.data());
    if (info != 0) throw numeric_error("zheevd failed, info=" + std::to_string(info));
}

}  // namespace wigner::la
