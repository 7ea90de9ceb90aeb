#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lpsw/fft.hpp"
#include "lpsw/randfield.hpp"
#include "oracles.hpp"

using namespace lpsw;

namespace {
const Grid g = make_grid(32, kTwoPi);
const DyadicPartition part = build_partition(g);

Trajectory random_trajectory(std::uint64_t seed, int snaps, double T) {
    Trajectory traj;
    for (int i = 0; i < snaps; ++i) {
        RandomFieldSpec spec;
        spec.seed = trial_seed(seed, i);
        traj.snapshots.push_back({T * i / (snaps - 1), random_field(g, spec, &part)});
    }
    return traj;
}
}  // namespace

TEST_CASE("Lp norms") {
    CHECK(lp_norm(Field(g, 1), 2.0) == 0.0);
    CHECK(lp_norm(constant_field(g, -3.5), kInf) == 3.5);
    // ||cos(2 pi x1 / L)||_{L2} = L / sqrt(2)
    const Field c = cosine_mode(g, 1, 0, 1.0);
    CHECK(lp_norm(c, 2.0) == doctest::Approx(g.length / std::sqrt(2.0)).epsilon(1e-12));
    CHECK_THROWS_AS(lp_norm(c, 0.5), PreconditionError);
}

TEST_CASE("Besov norm basics") {
    CHECK(besov_norm(part, Field(g, 1), {1.5, 2, 2}).total == 0.0);

    SUBCASE("single mode matches the dense-oracle ladder") {
        const Field mode = cosine_mode(g, 3, 0, 1.0);  // |k| = 3, in phi_0 or phi_1
        const BesovParams bp{1.3, 2.0, 2.0};
        const NormReport rep = besov_norm(part, mode, bp);
        double ref = 0.0;
        int active = 0;
        for (int j = -1; j <= part.j_max(); ++j) {
            const Field blk = oracle::definition_block(g, j, mode);
            const double w = std::pow(2.0, bp.s * j) * lp_norm(blk, 2.0);
            if (w > 1e-10 * lp_norm(mode, 2.0)) ++active;
            ref += w * w;
        }
        CHECK(active <= 2);  // at most two adjacent annuli hold a single mode
        CHECK(rep.total == doctest::Approx(std::sqrt(ref)).epsilon(1e-12));
    }

    SUBCASE("ladder aggregate equals the report total") {
        RandomFieldSpec spec;
        spec.seed = 6;
        const Field f = random_field(g, spec, &part);
        const NormReport rep = besov_norm(part, f, {2.0, 2.0, 1.0});
        double sum = 0.0;
        for (const auto& [j, v] : rep.per_block) sum += v;
        CHECK(rep.total == doctest::Approx(sum).epsilon(1e-13));
    }

    SUBCASE("monotone comparison in s") {
        RandomFieldSpec spec;
        spec.seed = 16;
        const Field f = random_field(g, spec, &part);
        const double s1 = 1.0, s2 = 2.0;
        const double n1 = besov_norm(part, f, {s1, 2, 2}).total;
        const double n2 = besov_norm(part, f, {s2, 2, 2}).total;
        // 2^{j s1} <= 2^{s1-s2} 2^{j s2} holds blockwise for j >= 1 only;
        // with the j = -1 ball the safe comparison is n1 <= 2^{|s2-s1|} n2
        CHECK(n1 <= std::pow(2.0, std::abs(s2 - s1)) * n2 * (1.0 + 1e-12));
    }

    SUBCASE("scaling homogeneity") {
        RandomFieldSpec spec;
        spec.seed = 26;
        const Field f = random_field(g, spec, &part);
        const double base = besov_norm(part, f, {1.7, 2, 1}).total;
        const double scaled = besov_norm(part, (-2.5) * f, {1.7, 2, 1}).total;
        CHECK(scaled == doctest::Approx(2.5 * base).epsilon(1e-12));
    }

    SUBCASE("triangle inequality on random pairs") {
        for (int trial = 0; trial < 100; ++trial) {
            RandomFieldSpec sa, sb;
            sa.seed = trial_seed(600, trial);
            sb.seed = trial_seed(601, trial);
            const Field a = random_field(g, sa, &part);
            const Field b = random_field(g, sb, &part);
            const BesovParams bp{1.5, 2.0, 2.0};
            const double ab = besov_norm(part, a + b, bp).total;
            const double sum = besov_norm(part, a, bp).total + besov_norm(part, b, bp).total;
            CHECK(ab <= sum * (1.0 + 1e-10));
        }
    }

    SUBCASE("coverage violation is a hard error") {
        const DyadicPartition small = build_partition(g, 2);
        // mode with |k| = 12 sits above the top annulus (8/3) * 4 ~ 10.7
        const Field high = cosine_mode(g, 12, 0, 1.0);
        CHECK_THROWS_AS(besov_norm(small, high, {1.0, 2, 2}), CoverageError);
    }
}

TEST_CASE("Sobolev norm") {
    CHECK(sobolev_norm(Field(g, 1), 1.0) == 0.0);

    SUBCASE("single mode closed form") {
        const Field mode = cosine_mode(g, 2, 1, 1.0);
        const double kk = 4.0 + 1.0;
        const double expected = std::pow(1.0 + kk, 0.75) * lp_norm(mode, 2.0);
        CHECK(sobolev_norm(mode, 1.5) == doctest::Approx(expected).epsilon(1e-12));
    }

    SUBCASE("H^0 equals L2") {
        RandomFieldSpec spec;
        spec.seed = 41;
        const Field f = random_field(g, spec, &part);
        CHECK(sobolev_norm(f, 0.0) == doctest::Approx(lp_norm(f, 2.0)).epsilon(1e-12));
    }

    SUBCASE("equivalence band with B^s_{2,2} is stable") {
        const double s = 1.5;
        double lo = kInf, hi = 0.0;
        for (int trial = 0; trial < 50; ++trial) {
            RandomFieldSpec spec;
            spec.seed = trial_seed(700, trial);
            const Field f = random_field(g, spec, &part);
            const double ratio = sobolev_norm(f, s) / besov_norm(part, f, {s, 2, 2}).total;
            lo = std::min(lo, ratio);
            hi = std::max(hi, ratio);
        }
        CHECK(lo > 0.1);
        CHECK(hi < 10.0);
        CHECK(hi / lo < 5.0);  // a genuine two-sided equivalence band
    }
}

TEST_CASE("Chemin-Lerner norms") {
    SUBCASE("constant trajectory at rho = inf equals the snapshot norm") {
        RandomFieldSpec spec;
        spec.seed = 50;
        const Field f = random_field(g, spec, &part);
        Trajectory traj;
        traj.snapshots.push_back({0.0, f});
        traj.snapshots.push_back({0.5, f});
        traj.snapshots.push_back({1.0, f});
        const BesovParams bp{1.5, 2, 2};
        CHECK(chemin_lerner_norm(part, traj, kInf, bp).total ==
              doctest::Approx(besov_norm(part, f, bp).total).epsilon(1e-12));
    }

    SUBCASE("single snapshot with rho = 1 integrates to zero") {
        RandomFieldSpec spec;
        spec.seed = 51;
        Trajectory traj;
        traj.snapshots.push_back({0.0, random_field(g, spec, &part)});
        CHECK(chemin_lerner_norm(part, traj, 1.0, {1.0, 2, 2}).total == 0.0);
    }

    SUBCASE("empty trajectory refused") {
        Trajectory traj;
        CHECK_THROWS_AS(chemin_lerner_norm(part, traj, 2.0, {1.0, 2, 2}), PreconditionError);
    }

    SUBCASE("Minkowski comparison both ways") {
        for (int trial = 0; trial < 50; ++trial) {
            const Trajectory traj = random_trajectory(trial_seed(800, trial), 9, 1.0);
            // r >= rho: tilde norm below the plain norm
            {
                const BesovParams bp{1.2, 2.0, kInf};
                const double tilde = chemin_lerner_norm(part, traj, 2.0, bp).total;
                const double plain = time_lp_besov_norm(part, traj, 2.0, bp);
                CHECK(tilde <= plain * (1.0 + 1e-12));
            }
            // r <= rho: plain norm below the tilde norm
            {
                const BesovParams bp{1.2, 2.0, 1.0};
                const double tilde = chemin_lerner_norm(part, traj, 2.0, bp).total;
                const double plain = time_lp_besov_norm(part, traj, 2.0, bp);
                CHECK(plain <= tilde * (1.0 + 1e-12));
            }
        }
    }

    SUBCASE("rho = inf, r = inf is the sup of per-block sups") {
        const Trajectory traj = random_trajectory(900, 5, 1.0);
        const BesovParams bp{0.8, 2.0, kInf};
        const TrajectoryNorm tn = chemin_lerner_norm(part, traj, kInf, bp);
        double ref = 0.0;
        for (const auto& snap : traj.snapshots) {
            const NormReport nr = besov_norm(part, snap.f, bp);
            for (const auto& [j, v] : nr.per_block) ref = std::max(ref, v);
        }
        CHECK(tn.total == doctest::Approx(ref).epsilon(1e-12));
    }
}
