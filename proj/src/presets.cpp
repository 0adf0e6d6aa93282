#include "specdiff/presets.hpp"

#include <cmath>
#include <regex>
#include <sstream>

#include "specdiff/errors.hpp"
#include "specdiff/projections.hpp"

namespace specdiff {

SeededRng::SeededRng(std::uint64_t seed) : engine_(seed) {}

double SeededRng::uniform() {
    // Top 53 bits give every double in [0, 1) on the 2^-53 lattice.
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double SeededRng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double SeededRng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * M_PI * u2);
    has_spare_ = true;
    return r * std::cos(2.0 * M_PI * u2);
}

double SeededRng::sign() { return (engine_() >> 63) != 0 ? 1.0 : -1.0; }

namespace {

constexpr const char* kKrein = "krein";
constexpr const char* kSquareWell = "schrodinger:square-well";
constexpr const char* kSech2 = "schrodinger:sech2";
constexpr const char* kTwoPhase = "schrodinger:two-phase";
constexpr const char* kRandom = "finite:random";

Preset schrodinger_preset(const std::string& name, std::string summary, double half_width, int n) {
    Preset p;
    p.name = name;
    p.summary = std::move(summary);
    p.model.kind = ModelKind::Schrodinger;
    p.model.preset = name;
    p.model.n = n;
    p.model.truncation = half_width;
    p.probes = {1.0};
    // Box modes contaminate S~ unless eps spans a few level spacings.
    p.ladder = {0.4, 0.2, 0.1};
    p.kappa = 2.5;
    p.resolvent_shift = -10.0;
    p.sizes = {n / 4, n / 2, n};
    p.trule_sizes = {60, 120, 240};
    return p;
}

}  // namespace

std::vector<std::string> preset_names() {
    return {kKrein, kSquareWell, kSech2, kTwoPhase, std::string(kRandom) + "(<seed>)"};
}

Preset find_preset(const std::string& name) {
    if (name == kKrein) {
        Preset p;
        p.name = kKrein;
        p.summary = "Krein's half-line example, Galerkin cells on [0, L]";
        p.model.kind = ModelKind::Krein;
        p.model.preset = kKrein;
        p.model.n = 400;
        p.model.truncation = 40.0;
        p.probes = {0.5};
        p.ladder = {0.2, 0.1, 0.05};
        p.kappa = 1.0;
        p.resolvent_shift = -1.0;
        p.sizes = {100, 200, 400};
        p.trule_sizes = {60, 120, 240};
        return p;
    }
    if (name == kSquareWell) {
        return schrodinger_preset(name, "-d2/dx2 - 1 on |x| < 1, Dirichlet box", 40.0, 800);
    }
    if (name == kSech2) {
        return schrodinger_preset(name, "-d2/dx2 - sech^2(x), Dirichlet box", 80.0, 1600);
    }
    if (name == kTwoPhase) {
        return schrodinger_preset(name, "-d2/dx2 - 6 sech^2(2x): well separated eigenphases",
                                  40.0, 800);
    }
    static const std::regex random_re(R"(finite:random\((\d{1,18})\))");
    std::smatch m;
    if (std::regex_match(name, m, random_re)) {
        Preset p;
        p.name = name;
        p.summary = "random gapped finite pair";
        p.model.kind = ModelKind::FiniteRandom;
        p.model.preset = kRandom;
        p.model.seed = std::stoull(m[1].str());
        p.model.n = 12;
        p.model.rank = 3;
        p.probes = {-0.25, 0.25};
        p.model.probes = p.probes;
        p.ladder = {1e-1, 3e-2, 1e-2};
        p.kappa = 0.0;
        p.resolvent_shift = -10.0;
        p.sizes = {6, 12, 24};
        p.trule_sizes = {60, 120, 240};
        return p;
    }
    std::ostringstream os;
    os << "unknown preset '" << name << "'; known:";
    for (const auto& n : preset_names()) os << ' ' << n;
    throw InvalidInput(os.str());
}

PotentialSpec preset_potential(const ModelParams& model) {
    PotentialSpec s;
    s.name = model.preset;
    s.half_width = model.truncation;
    s.grid_size = model.n;
    s.decay_exponent = 2.0;
    if (model.preset == kSquareWell) {
        s.potential = [](double x) { return std::abs(x) < 1.0 ? -1.0 : 0.0; };
        s.bound_constant = 4.0;
        s.breakpoints = {-1.0, 1.0};
    } else if (model.preset == kSech2) {
        s.potential = [](double x) {
            const double c = 1.0 / std::cosh(x);
            return -c * c;
        };
        s.bound_constant = 4.0;
    } else if (model.preset == kTwoPhase) {
        s.potential = [](double x) {
            const double c = 1.0 / std::cosh(2.0 * x);
            return -6.0 * c * c;
        };
        s.bound_constant = 24.0;
    } else {
        throw InvalidInput("preset_potential: '" + model.preset + "' is not a Schrodinger preset");
    }
    return s;
}

OperatorPair random_finite_pair(int n, int rank, std::uint64_t seed,
                                const std::vector<double>& probes, double min_gap) {
    if (n < 1 || rank < 1) throw InvalidInput("random_finite_pair: n and rank must be positive");
    if (!(min_gap > 0.0) || min_gap >= 0.1) {
        throw InvalidInput("random_finite_pair: min_gap must lie in (0, 0.1)");
    }
    SeededRng rng(seed);
    auto far = [&](double x) {
        for (double p : probes) {
            if (std::abs(x - p) < min_gap) return false;
        }
        return true;
    };
    constexpr int kAttempts = 200;
    for (int attempt = 0; attempt < kAttempts; ++attempt) {
        CMatrix h0 = CMatrix::Zero(n, n);
        for (int i = 0; i < n; ++i) {
            double x = rng.uniform(-1.0, 1.0);
            while (!far(x)) x = rng.uniform(-1.0, 1.0);
            h0(i, i) = x;
        }
        CMatrix g(rank, n);
        const double scale = 1.0 / std::sqrt(2.0 * n);
        for (int a = 0; a < rank; ++a) {
            for (int i = 0; i < n; ++i) {
                const double re = rng.normal();
                g(a, i) = cplx(re, rng.normal()) * scale;
            }
        }
        CMatrix v0 = CMatrix::Zero(rank, rank);
        for (int a = 0; a < rank; ++a) v0(a, a) = rng.sign();

        ModelFacts meta;
        meta.descriptor = "finite:random";
        meta.exact = {{"seed", static_cast<double>(seed)}, {"attempt", attempt}};
        OperatorPair pair = build_finite_pair(h0, g, v0, std::move(meta));
        const SpectralDecomposition d = herm_eig(pair.H);
        bool ok = true;
        for (double p : probes) ok = ok && spectral_gap(d, p) >= min_gap;
        if (ok) return pair;
    }
    throw SpectralCollision("random_finite_pair: no gapped draw found", 0.0, 0.0);
}

OperatorPair build_model(const ModelParams& model) {
    switch (model.kind) {
        case ModelKind::Krein:
            return build_krein(model.n, model.truncation);
        case ModelKind::Schrodinger:
            return build_schrodinger_1d(preset_potential(model));
        case ModelKind::FiniteRandom:
            return random_finite_pair(model.n, model.rank, model.seed, model.probes, model.min_gap);
    }
    throw InvalidInput("build_model: unknown model kind");
}

}  // namespace specdiff
