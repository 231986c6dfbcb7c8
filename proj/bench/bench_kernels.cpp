// Compares the parallel kernels against the serial reference route and
// reports per-call timings plus the largest relative deviation.
#include <chrono>
#include <cstdio>
#include <string>

#include "rodeodb/dbap.hpp"
#include "rodeodb/dual_basis.hpp"
#include "rodeodb/experiments.hpp"
#include "rodeodb/geometry.hpp"
#include "rodeodb/reference.hpp"

using namespace rodeodb;

namespace {

template <typename Fn>
double time_ms(Fn&& fn, int reps) {
    fn();  // warm up
    const auto t0 = std::chrono::steady_clock::now();
    for (int r = 0; r < reps; ++r) fn();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

double rel_dev(const Matrix& a, const Matrix& b) {
    const double base = b.norm();
    if (base == 0.0) return a.norm();
    return (a - b).norm() / base;
}

void report(const char* name, double par_ms, double ser_ms, double dev) {
    std::printf("%-22s parallel %9.3f ms   serial %9.3f ms   speedup %5.2fx   rel dev %.3e\n",
                name, par_ms, ser_ms, ser_ms / par_ms, dev);
}

}  // namespace

int main(int argc, char** argv) {
    int T = 1200, m = 60, reps = 5;
    if (argc > 1) T = std::stoi(argv[1]);
    if (argc > 2) m = std::stoi(argv[2]);
    if (argc > 3) reps = std::stoi(argv[3]);
    const int d = 3;
    std::printf("kernel benchmark: T=%d m=%d d=%d reps=%d workers=%d\n", T, m, d, reps,
                resolve_workers(0));

    const PointConfiguration pts = gen_sensors(T, d, 100.0, 7);
    const AnchorSplit split = AnchorSplit::contiguous(T, m);
    const auto [E, F] = edm_blocks(pts, split);
    const DualBasisContext ctx(E, F, 0);

    {
        Matrix par, ser;
        const double tp = time_ms([&] { par = pairwise_edm(pts); }, reps);
        const double ts = time_ms([&] { ser = reference::pairwise_edm(pts); }, reps);
        report("pairwise_edm", tp, ts, rel_dev(par, ser));
    }
    {
        Matrix par, ser;
        const double tp = time_ms([&] { par = op_B(F, ctx); }, reps);
        const double ts = time_ms([&] { ser = reference::op_B(E, F); }, reps);
        report("op_B", tp, ts, rel_dev(par, ser));
    }
    const Matrix B = op_B(F, ctx);
    {
        Matrix par, ser;
        const double tp = time_ms([&] { par = op_A(B, ctx); }, reps);
        const double ts =
            time_ms([&] { ser = reference::op_A(E, ctx.f_central(), B, 0); }, reps);
        report("op_A", tp, ts, rel_dev(par, ser));
    }
    {
        const double xi = 0.5 * F.cwiseAbs().maxCoeff();
        Matrix par, ser;
        const double tp = time_ms([&] { par = hard_threshold(F, xi, 0); }, reps);
        const double ts = time_ms([&] { ser = reference::hard_threshold(F, xi, 0); }, reps);
        report("hard_threshold", tp, ts, rel_dev(par, ser));
    }
    {
        const SvdTriple t = truncated_rank_d(B, d);
        Matrix par, ser;
        const double tp = time_ms([&] { par = tangent_project(B, t.U, t.V); }, reps);
        const double ts = time_ms([&] { ser = reference::tangent_project(B, t.U, t.V); }, reps);
        report("tangent_project", tp, ts, rel_dev(par, ser));
    }
    return 0;
}
