#pragma once

#include <memory>

#include "hdx/cohomology.hpp"
#include "hdx/complex.hpp"
#include "hdx/covers.hpp"
#include "hdx/rng.hpp"

namespace hdx {

/// An assignment s -> f_s of local functions on the k-faces, evaluated
/// lazily (the face sets are astronomically large on Delta_60).
/// eval returns the values of f_s on the sorted vertices of s.
struct Ensemble {
    virtual ~Ensemble() = default;
    virtual int alphabet() const = 0;
    virtual std::vector<int> eval(const Face& s) const = 0;
};

/// f_s = G|_s with each coordinate independently flipped to a different
/// symbol with probability eta (deterministic per face given the seed).
std::unique_ptr<Ensemble> plant(const Complex& x, std::vector<int> global,
                                int alphabet, double eta, std::uint64_t seed);

/// Independent uniform values per face and coordinate.
std::unique_ptr<Ensemble> iid_ensemble(const Complex& x, int alphabet,
                                       std::uint64_t seed);

/// Cover counterexample: G lives on the total space of an ell-cover; each
/// base face picks one of its ell lifts (seeded-random rule) and reads G
/// through it.
std::unique_ptr<Ensemble> plant_cover(const Complex& x, const Cochain& phi,
                                      int sheets, std::vector<int> global_on_cover,
                                      int alphabet, std::uint64_t seed);

/// Per-face mixture: planted with probability lambda, else iid.
std::unique_ptr<Ensemble> mixture_ensemble(const Complex& x, std::vector<int> global,
                                           int alphabet, double lambda,
                                           std::uint64_t seed);

enum class TestKind { VTest, ZTest, Custom };

/// V-test: two k-faces inside a d-face with intersection sqrt(k+1);
/// Z-test: three queries with the middle one chaining two intersections;
/// Custom: a V-shaped test with an explicit overlap m.
struct TestDistribution {
    TestKind kind = TestKind::VTest;
    int k = 3;
    int overlap = 2;

    static TestDistribution v_test(int k);
    static TestDistribution z_test(int k);
    static TestDistribution custom(int k, int overlap);

    int queries() const { return kind == TestKind::ZTest ? 3 : 2; }
    int d() const;

    /// Samples a tuple of k-faces from the extension to x.
    std::vector<Face> sample(const Complex& x, SplitMix64& rng) const;

    /// Enumerates (tuple, probability) pairs when the support is small.
    void enumerate(const Complex& x,
                   const std::function<void(const std::vector<Face>&, const Rat&)>& cb)
        const;

    std::uint64_t support_size(const Complex& x) const;
};

struct AgreeEstimate {
    double agree = 0;
    double ci_lo = 0, ci_hi = 1;
    bool exact = false;
    std::uint64_t trials = 0;
};

/// Agreement probability: all queried functions agree on overlaps. Exact
/// enumeration when the tuple space is at most `exact_budget`.
AgreeEstimate agree(const Complex& x, const Ensemble& f, const TestDistribution& d,
                    std::uint64_t trials, std::uint64_t seed,
                    std::uint64_t exact_budget = 1'000'000);

struct DecodeResult {
    std::vector<int> global;     // plurality vote per vertex
    double coord_agreement = 0;  // Pr over (s, v in s) of f_s(v) == G(v)
    double face_explained = 0;   // Pr_s[dist(f_s, G|_s) <= eta]
    double tuple_event = 0;      // Pr over D-tuples of the soundness event
    bool exact = false;
};

/// Baseline decoder: per-vertex plurality over incident f_s, then the
/// explained-fraction statistics at approximation level eta.
DecodeResult decode_global(const Complex& x, const Ensemble& f,
                           const TestDistribution& d, double eta,
                           std::uint64_t trials, std::uint64_t seed,
                           std::uint64_t exact_budget = 1'000'000);

struct SweepRow {
    std::string family;
    double param = 0;
    double agree = 0, ci_lo = 0, ci_hi = 0;
    double explained = 0;
};

/// (Agree, explained) pairs over a parameter grid of ensembles.
std::vector<SweepRow> soundness_sweep(
    const Complex& x, const TestDistribution& d,
    const std::vector<std::pair<std::string, const Ensemble*>>& family,
    const std::vector<double>& params, double eta, std::uint64_t trials,
    std::uint64_t seed);

std::string sweep_to_csv(const std::vector<SweepRow>& rows);

}  // namespace hdx
