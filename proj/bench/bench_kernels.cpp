// Timing comparison of the OpenMP kernels against their serial reference
// paths: slender-body mobility assembly and the blob O(N^2) kernel sums.

#include <chrono>
#include <cstdio>

#include "fiberflow/blob.hpp"
#include "fiberflow/fiber.hpp"
#include "fiberflow/mobility.hpp"
#include "fiberflow/parallel.hpp"

using namespace fiberflow;

namespace {

template <typename F>
double time_ms(F&& fn, int reps) {
  auto t0 = std::chrono::high_resolution_clock::now();
  for (int r = 0; r < reps; ++r) fn();
  auto t1 = std::chrono::high_resolution_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

}  // namespace

int main() {
  const int threads = configure_threads();
  std::printf("threads: %d\n", threads);

  const double L = 2.0;
  rpy::KernelParams params(0.02, 1.0);

  {
    const int n = 45;
    FiberGeometry geom = fiber::qfiber_geometry(n, L, 7.0);
    spectral::SpectralOps ops(geom.grid);
    mobility::QuadPrecompute pre = mobility::precompute(geom.grid, ops, params, 8);
    mobility::MobilityOptions serial, par;
    serial.parallel = false;
    par.parallel = true;
    const double ts = time_ms([&] { mobility::build_mobility(geom, ops, params, pre, serial); }, 5);
    const double tp = time_ms([&] { mobility::build_mobility(geom, ops, params, pre, par); }, 5);
    std::printf("mobility assembly N=%d: serial %.2f ms, omp %.2f ms, speedup %.2fx\n", n, ts, tp,
                ts / tp);
    MatrixXd a = mobility::build_mobility(geom, ops, params, pre, serial).Mtt;
    MatrixXd b = mobility::build_mobility(geom, ops, params, pre, par).Mtt;
    std::printf("  max |serial - omp| = %.3e\n", (a - b).cwiseAbs().maxCoeff());
  }

  {
    fiber::FiberState ref = fiber::make_qfiber(64, L, 1.0);
    auto X_fn = [&](double s) { return spectral::interp_vec3(ref.grid, ref.X, s); };
    auto tau_fn = [&](double s) { return fiber::qfiber_tau(s, L, 1.0); };
    blob::BlobChain chain = blob::make_chain(400, L, X_fn, tau_fn);
    const double ts =
        time_ms([&] { blob::mobility_matrix(chain, params, blob::Coupling::TT, false); }, 3);
    const double tp =
        time_ms([&] { blob::mobility_matrix(chain, params, blob::Coupling::TT, true); }, 3);
    std::printf("blob mobility N=400: serial %.2f ms, omp %.2f ms, speedup %.2fx\n", ts, tp, ts / tp);
    MatrixXd a = blob::mobility_matrix(chain, params, blob::Coupling::TT, false);
    MatrixXd b = blob::mobility_matrix(chain, params, blob::Coupling::TT, true);
    std::printf("  max |serial - omp| = %.3e\n", (a - b).cwiseAbs().maxCoeff());
  }
  return 0;
}
