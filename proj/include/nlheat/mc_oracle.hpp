#pragma once

#include <cstdint>
#include <vector>

#include "nlheat/grid.hpp"
#include "nlheat/heat_kernel.hpp"
#include "nlheat/kernels.hpp"

namespace nlheat {

/// Counter-based random source: every draw is a hash of (seed, stream,
/// counter), so parallel substreams reproduce bit-for-bit regardless of
/// scheduling. Models UniformRandomBitGenerator for the stdlib
/// distributions.
class CounterRng {
  public:
    using result_type = std::uint64_t;
    CounterRng(std::uint64_t seed, std::uint64_t stream)
        : state_(mix(seed ^ mix(stream + 0x9e3779b97f4a7c15ull))) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~0ull; }
    result_type operator()() {
        state_ += 0x9e3779b97f4a7c15ull;
        return mix(state_);
    }
    double uniform() {
        return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
    }

  private:
    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xbf58476d1ce4e5b9ull;
        z ^= z >> 27;
        z *= 0x94d049bb133111ebull;
        z ^= z >> 31;
        return z;
    }
    std::uint64_t state_;
};

enum class SmallJumpTreatment { drop, gaussian_substitute };

struct SimulationPlan {
    LevyKernelSpec spec;
    double horizon = 1.0;
    std::size_t samples = 100000;
    double truncation = 1e-3;  // jumps below this radius are dropped/substituted
    std::uint64_t seed = 2024;
    SmallJumpTreatment treatment = SmallJumpTreatment::gaussian_substitute;
    int jobs = 2;
};

struct SampleSet {
    std::vector<Vec> positions;
    int dim = 1;
    double jump_rate = 0.0;       // intensity of jumps above the truncation
    double substitute_sigma = 0.0;  // per-axis std of the small-jump Gaussian
};

/// Compound-Poisson simulation of the process with the spec's jump kernel:
/// jump radii by inverse transform of the tabulated radial tail, directions
/// uniform (with a modulation rejection step for the non-radial member),
/// small jumps dropped or replaced by their matching Gaussian.
SampleSet simulate_levy(const SimulationPlan& plan);

/// Histogram on the grid cells smoothed by a Gaussian of the given
/// bandwidth (>= grid spacing), normalized to the in-box fraction.
Field empirical_density(const SampleSet& samples, const Grid& g, double bandwidth);

struct DensityComparison {
    double l1_distance = 0.0;
    double ci_lower = 0.0;  // bootstrap 95% interval over cell resamples
    double ci_upper = 0.0;
};

/// L1 distance between the empirical field and a reference kernel, with a
/// 200-resample multinomial bootstrap on the histogram.
DensityComparison compare_density(const SampleSet& samples, const Grid& g,
                                  double bandwidth, const KernelField& reference,
                                  std::uint64_t seed = 7);

}  // namespace nlheat
