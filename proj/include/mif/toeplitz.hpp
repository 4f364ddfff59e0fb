#pragma once

#include "mif/hardy.hpp"
#include "mif/inner.hpp"

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace mif {

/// A unimodular (or at least bounded) symbol on the line.
class Symbol {
public:
    struct InnerPair {
        InnerFunction theta;
        InnerFunction inner;
    };
    struct Raw {
        std::function<Complex(double)> eval;
        std::string name;
    };

    /// u = Theta conj(I).
    static Symbol inner_pair(InnerFunction theta, InnerFunction inner);
    /// u = phi^n exp(i (c + a + b~)).
    static Symbol synthesized(SynthesizedSymbol s);
    static Symbol raw(std::function<Complex(double)> eval, std::string name);
    /// phi(t)^k with phi(t) = (t - i)/(t + i).
    static Symbol cayley_power(int k);

    Complex operator()(double t) const;
    CircleTrace trace(int resolution) const;
    /// Continuous increase of arg u from a to b when it is known in closed form
    /// (inner pairs: arg Theta - arg I); empty otherwise.
    std::optional<double> exact_phase_increment(double a, double b) const;
    /// Conjugate symbol conj(u).
    Symbol conjugate() const;
    std::string describe() const;

    bool is_unimodular_family() const { return !std::holds_alternative<Raw>(*rep_); }

private:
    using Rep = std::variant<InnerPair, SynthesizedSymbol, Raw>;
    explicit Symbol(Rep rep) : rep_(std::make_shared<const Rep>(std::move(rep))) {}
    std::shared_ptr<const Rep> rep_;
};

/// T[j][k] = u^(j - k), j, k in [0, N).
MatrixXcd toeplitz_section(const CircleTrace& trace, int n);
/// H[j][k] = u^(-1 - j - k).
MatrixXcd hankel_section(const CircleTrace& trace, int n);
/// Hankel section of conj(u): entries conj(u^(1 + j + k)).
MatrixXcd conjugate_hankel_section(const CircleTrace& trace, int n);

VectorXd singular_values(const MatrixXcd& m);

struct WindingResult {
    int winding = 0;
    double residual = 0.0;  // distance of the raw increment / 2 pi from the integer
    double max_jump = 0.0;  // largest principal phase step
};

inline constexpr double kMaxPhaseJump = 0.75 * kPi;

WindingResult winding_number(const CircleTrace& trace);
/// Winding of a symbol at `resolution`. Grid intervals use the closed-form phase increment
/// when the symbol has one; otherwise an interval whose principal step exceeds pi/2 is
/// bisected by evaluating the symbol. Throws UnwrapFailure when a step above kMaxPhaseJump
/// survives kMaxBisections levels (a genuine jump).
inline constexpr int kMaxBisections = 30;
WindingResult winding_number(const Symbol& symbol, int resolution);

struct HankelDecay {
    int n = 0;
    VectorXd sigma;
    int decay_index = -1;   // smallest m with sigma_m < tau sigma_0, -1 if none
    double exponent = 0.0;  // least-squares slope of log sigma_m against log(m + 1)
    double frobenius_sq = 0.0;
};

HankelDecay hankel_decay(const MatrixXcd& h, double tau = 1e-3);

enum class CompactFlag { Compact, NotCompact, Unknown };
const char* to_string(CompactFlag f);

struct CompactnessEvidence {
    int n = 0;
    double increment = 0.0;  // (||H_2N||^2 - ||H_N||^2) / ||H_2N||^2
    CompactFlag flag = CompactFlag::Unknown;
    HankelDecay decay;       // at 2N
};

inline constexpr double kCompactIncrement = 1e-3;
inline constexpr double kNotCompactIncrement = 1e-2;

/// Hankel compactness proxy from the Frobenius growth between sections N and 2N.
CompactnessEvidence hankel_compactness(const CircleTrace& trace, int n, bool conjugate_symbol = false);

struct SectionSpectrum {
    std::vector<int> sizes;
    std::vector<double> sigma_min;
    std::vector<double> sigma_max;
    std::vector<VectorXd> singular_values;
    WindingResult winding;
    double tau = 0.1;
    std::vector<double> cluster_fraction;
    std::vector<int> outliers;
    int resolution = 0;
};

/// Resolution used when none is given: the larger of 4096 and 4 max(sizes), rounded up to a power of two.
int default_resolution(const std::vector<int>& sizes);

/// A precomputed winding (for instance from the adaptive Symbol overload) skips the trace unwrap.
SectionSpectrum section_spectrum(const CircleTrace& trace, const std::vector<int>& sizes, double tau = 0.1,
                                 const std::optional<WindingResult>& winding = std::nullopt);

enum class Verdict { Yes, No, Inconclusive };
const char* to_string(Verdict v);

struct InvertibilityEvidence {
    Verdict verdict = Verdict::Inconclusive;  // Yes = invertible
    SectionSpectrum spectrum;
    double tau_inv = 1e-3;
    double min_sigma = 0.0;
    double last_change = 0.0;   // relative change of sigma_min over the last two sizes
    double fit_slope = 0.0;     // log sigma_min against log N
    double fit_r2 = 0.0;
};

inline constexpr double kTauInvertible = 1e-3;

InvertibilityEvidence invertibility_verdict(const CircleTrace& trace, const std::vector<int>& sizes,
                                            double tau_inv = kTauInvertible);
/// Symbol overloads sample at `resolution` (default_resolution when 0) and take the winding
/// from the adaptive winding_number(Symbol, int).
InvertibilityEvidence invertibility_verdict(const Symbol& symbol, const std::vector<int>& sizes,
                                            double tau_inv = kTauInvertible, int resolution = 0);

enum class Criterion { Pass, Fail, Unknown };
const char* to_string(Criterion c);

struct UnitaryCompactEvidence {
    Verdict verdict = Verdict::Inconclusive;
    SectionSpectrum spectrum;
    Criterion winding = Criterion::Unknown;
    Criterion outliers = Criterion::Unknown;
    std::vector<double> outlier_ratios;  // (count_2N + 1) / (count_N + 1) per consecutive pair
    Criterion hankel = Criterion::Unknown;
    CompactnessEvidence hankel_u, hankel_conj;
};

inline constexpr double kOutlierGrowthRatio = 1.5;

UnitaryCompactEvidence unitary_plus_compact_verdict(const CircleTrace& trace, const std::vector<int>& sizes,
                                                    double tau = 0.1);
UnitaryCompactEvidence unitary_plus_compact_verdict(const Symbol& symbol, const std::vector<int>& sizes,
                                                    double tau = 0.1, int resolution = 0);

}  // namespace mif
