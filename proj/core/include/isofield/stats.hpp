#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace isofield {

/// splitmix64 step; the project-wide stable hash/seed primitive.
std::uint64_t splitmix64(std::uint64_t& state);

/// Replicate seed = stable hash of (master seed, replicate index); independent
/// of execution order by construction.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t replicate);

/// Deterministic RNG with an explicit Gaussian recipe (Box-Muller over
/// splitmix64 uniforms), so streams do not depend on the standard library's
/// distribution internals.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    double uniform();             // [0, 1)
    double uniform_symmetric();   // [-1, 1)
    double gaussian();            // N(0, 1)

  private:
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// Fixed-shape pairwise tree sum; result independent of how the values were
/// produced (workers, chunking), dependent only on the array contents.
double pairwise_sum(const double* xs, std::size_t n);
double pairwise_sum(const std::vector<double>& xs);

double mean(const std::vector<double>& xs);
/// Unbiased sample variance (n-1 denominator), pairwise-reduced.
double sample_variance(const std::vector<double>& xs);
double standard_error(const std::vector<double>& xs);

/// One z-scored comparison, the report atom of every Monte Carlo suite.
struct ZCheck {
    std::string name;
    double statistic = 0.0;
    double se = 0.0;
    double z = 0.0;
    bool pass = false;
};

/// z for mean(xs) against a known target.
ZCheck mean_against(const std::string& name, const std::vector<double>& xs, double target,
                    double z_threshold);

/// Paired z for mean(xs - ys) against 0. Pairs that agree to double
/// precision (max |x-y| <= 1e-12 max|x|,|y|) count as equal with z = 0;
/// otherwise the rounding residue of a mathematically exact identity would
/// be z-scored against its own vanishing SE.
ZCheck paired_zero(const std::string& name, const std::vector<double>& xs,
                   const std::vector<double>& ys, double z_threshold);

/// Runs fn(replicate) for replicate in [0, n) over `workers` threads with a
/// static partition. fn must write only to its replicate's slots.
void run_replicates(std::size_t n, int workers, const std::function<void(std::size_t)>& fn);

/// FNV-1a 64-bit over a byte buffer, hex-encoded; used for manifest digests.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace isofield
