#include "skewlab/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "skewlab/rng.hpp"

#include "json.hpp"

namespace skewlab {

void ModelConfig::validate() const {
    if (M < 1 || N < 1) throw std::domain_error("ModelConfig: M, N must be >= 1");
    if (!(rho > 0.0)) throw std::domain_error("ModelConfig: rho must be positive");
    if (M != static_cast<int>(std::floor(rho * N)))
        throw std::domain_error("ModelConfig: M != floor(rho*N)");
    if (!offsets_x.empty() && static_cast<int>(offsets_x.size()) != M)
        throw std::domain_error("ModelConfig: offsets_x must have length M");
}

std::string ModelConfig::to_json() const {
    nlohmann::json j;
    j["M"] = M;
    j["N"] = N;
    j["rho"] = rho;
    j["freq"] = freq.to_string();
    j["quad_form"] = quad_form == QuadForm::Binomial ? "binomial"
                     : quad_form == QuadForm::Square ? "square"
                                                     : "linear";
    j["linear"] = linear == LinearTerm::RandomY ? "random_y" : "zero";
    j["y_seed"] = y_seed;
    j["offsets_x"] = offsets_x.empty() ? "zero" : "custom";
    return j.dump();
}

ModelConfig skewshift_config(int N, double rho, const FrequencySpec& freq, std::uint64_t y_seed) {
    ModelConfig cfg;
    cfg.N = N;
    cfg.rho = rho;
    cfg.M = static_cast<int>(std::floor(rho * N));
    cfg.freq = freq;
    cfg.quad_form = QuadForm::Binomial;
    cfg.linear = LinearTerm::RandomY;
    cfg.y_seed = y_seed;
    return cfg;
}

ModelConfig table_model_config(char model, int N) {
    ModelConfig cfg;
    cfg.N = N;
    cfg.M = N;
    cfg.rho = 1.0;
    cfg.linear = LinearTerm::Zero;
    switch (model) {
        case 'A': // j^2 sqrt(i)
            cfg.freq.kind = FreqKind::SqrtI;
            cfg.quad_form = QuadForm::Square;
            break;
        case 'B': // j^2 i sqrt(2)
            cfg.freq.kind = FreqKind::IAlpha;
            cfg.freq.alpha = dd::sqrt(DD(2.0));
            cfg.freq.text = "ialpha:sqrt2";
            cfg.quad_form = QuadForm::Square;
            break;
        case 'C': // j sqrt(i)
            cfg.freq.kind = FreqKind::SqrtI;
            cfg.quad_form = QuadForm::Linear;
            break;
        default:
            throw std::domain_error("table model must be 'A', 'B' or 'C'");
    }
    return cfg;
}

std::uint64_t quad_term(QuadForm form, std::uint64_t j) {
    switch (form) {
        case QuadForm::Binomial: return j * (j - 1) / 2;
        case QuadForm::Square: return j * j;
        case QuadForm::Linear: return j;
    }
    return 0;
}

std::complex<double> unit_phase(double frac01) {
    double t = 6.283185307179586476925286766559 * frac01;
    return {std::cos(t), std::sin(t)};
}

PhaseMatrix build_matrix(const ModelConfig& config) {
    config.validate();
    const int M = config.M;
    const int N = config.N;

    PhaseMatrix X;
    X.M = M;
    X.N = N;
    X.config = config;

    X.y.assign(M, 0.0);
    if (config.linear == LinearTerm::RandomY) {
        CounterRng rng(config.y_seed);
        for (int i = 0; i < M; ++i) X.y[i] = rng.uniform01(i);
    }

    FrequencySequence freq = make_frequencies(config.freq, M, N);

    const double scale = 1.0 / std::sqrt(double(N));
    X.entries.resize(std::size_t(M) * N);

#pragma omp parallel for schedule(static)
    for (int i = 0; i < M; ++i) {
        const DD w = freq.values[i];
        const DD yi(X.y[i]);
        const double xi = config.offsets_x.empty() ? 0.0 : config.offsets_x[i];
        std::complex<double>* row = X.entries.data() + std::size_t(i) * N;
        for (int j = 1; j <= N; ++j) {
            double ph = phase_frac(quad_term(config.quad_form, std::uint64_t(j)), w);
            if (X.y[i] != 0.0) ph += phase_frac(std::uint64_t(j), yi);
            ph += xi;
            ph -= std::floor(ph);
            row[j - 1] = scale * unit_phase(ph);
        }
    }
    return X;
}

} // namespace skewlab
