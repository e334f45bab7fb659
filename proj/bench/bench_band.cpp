// Benchmark the band-matrix kernels: OpenMP row-parallel multiply and apply
// against the serial reference, on the tridiagonal operator pencil at a fixed
// rational point.  Each timing is paired with an equality check between the
// two code paths.
#include <chrono>
#include <iostream>
#include <vector>

#include "qwilson/specalg.hpp"

using namespace qwilson;
using steady = std::chrono::steady_clock;

namespace {

double ms_since(steady::time_point t0) {
    return std::chrono::duration<double, std::milli>(steady::now() - t0).count();
}

}  // namespace

int main() {
    const Params<Rational> p = Params<Rational>::with_dependent_f(
        Rational(1, 2), Rational(3), Rational(5), Rational(7), Rational(11), Rational(13));

    std::cout << "band kernel benchmark, exact rational arithmetic\n";
    std::cout << "point " << "q=1/2 a=3 b=5 c=7 d=11 e=13\n\n";

    for (long size : {256L, 1024L, 4096L}) {
        // Entry digit counts grow linearly with the row index (the recurrence
        // coefficients carry q^m factors), so the per-row cost is nonuniform.
        const auto g = detail::build_triplet(TripletKind::plain, p, size);

        auto t0 = steady::now();
        const BandMatrix<Rational> prod_serial = band_mul_serial(g.X, g.Z);
        const double mul_serial = ms_since(t0);

        t0 = steady::now();
        const BandMatrix<Rational> prod_parallel = band_mul(g.X, g.Z);
        const double mul_parallel = ms_since(t0);

        if (!(prod_serial == prod_parallel)) {
            std::cout << "[FAIL] parallel multiply disagrees with serial at size " << size
                      << "\n";
            return 1;
        }

        std::vector<Rational> v(static_cast<std::size_t>(size));
        for (long i = 0; i < size; ++i)
            v[static_cast<std::size_t>(i)] = Rational(2 * i + 1, i + 2);

        t0 = steady::now();
        const std::vector<Rational> app_serial = band_apply_serial(prod_serial, v);
        const double apply_serial = ms_since(t0);

        t0 = steady::now();
        const std::vector<Rational> app_parallel = band_apply(prod_serial, v);
        const double apply_parallel = ms_since(t0);

        if (app_serial != app_parallel) {
            std::cout << "[FAIL] parallel apply disagrees with serial at size " << size << "\n";
            return 1;
        }

        std::cout << "size " << size << "\n";
        std::cout << "  mul    serial " << mul_serial << " ms   parallel " << mul_parallel
                  << " ms   speedup x" << mul_serial / mul_parallel << "\n";
        std::cout << "  apply  serial " << apply_serial << " ms   parallel " << apply_parallel
                  << " ms   speedup x" << apply_serial / apply_parallel << "\n";
    }
    std::cout << "\nall parallel results match the serial reference\n";
    return 0;
}
