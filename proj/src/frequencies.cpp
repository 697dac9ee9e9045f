#include "skewlab/frequencies.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "skewlab/errors.hpp"
#include "skewlab/rng.hpp"

namespace skewlab {

std::string FrequencySpec::to_string() const {
    if (!text.empty()) return text;
    std::ostringstream os;
    os.precision(17);
    switch (kind) {
        case FreqKind::IAlpha: os << "ialpha:" << alpha.to_double(); break;
        case FreqKind::SqrtI: os << "sqrti"; break;
        case FreqKind::Power: os << "power:" << alpha.to_double() << ":" << beta; break;
        case FreqKind::Random: os << "random:seed=" << seed; break;
        case FreqKind::Constant: os << "constant:" << constant; break;
        case FreqKind::File: os << "file:" << path; break;
    }
    return os.str();
}

static bool is_integer_valued(double x) { return std::floor(x) == x; }

static std::vector<DD> read_freq_file(const std::string& path, int M) {
    std::ifstream in(path);
    if (!in) throw input_error("frequency file '" + path + "' is not readable");
    std::vector<DD> values;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string trimmed;
        for (char c : line)
            if (!std::isspace(static_cast<unsigned char>(c))) trimmed += c;
        if (trimmed.empty() || trimmed[0] == '#') continue;
        try {
            values.push_back(dd::from_string(trimmed));
        } catch (const std::invalid_argument&) {
            throw input_error("frequency file '" + path + "' line " + std::to_string(lineno) +
                              ": not a decimal real");
        }
        if (static_cast<int>(values.size()) == M) break;
    }
    if (static_cast<int>(values.size()) < M)
        throw input_error("frequency file '" + path + "' has only " +
                          std::to_string(values.size()) + " values, need " + std::to_string(M));
    return values;
}

FrequencySequence make_frequencies(const FrequencySpec& spec, int M, int N) {
    if (M < 1) throw std::domain_error("make_frequencies: M must be >= 1");
    FrequencySequence seq;
    seq.spec = spec;
    seq.M = M;
    seq.values.reserve(M);
    switch (spec.kind) {
        case FreqKind::IAlpha:
            for (int i = 1; i <= M; ++i) seq.values.push_back(dd::mul_double(spec.alpha, double(i)));
            break;
        case FreqKind::SqrtI:
            for (int i = 1; i <= M; ++i) seq.values.push_back(dd::sqrt(DD(double(i))));
            break;
        case FreqKind::Power: {
            double a = spec.alpha.to_double();
            if (is_integer_valued(a) || is_integer_valued(spec.beta))
                throw std::domain_error("power frequencies need non-integer alpha, beta");
            if (!(a > spec.beta - 2.0))
                throw std::domain_error("power frequencies need alpha > beta - 2");
            if (N < 1) throw std::domain_error("power frequencies need N >= 1");
            DD logN = dd::log(DD(double(N)));
            DD shift = dd::mul_double(logN, spec.beta);
            for (int i = 1; i <= M; ++i) {
                DD e = dd::sub(dd::mul(spec.alpha, dd::log(DD(double(i)))), shift);
                seq.values.push_back(dd::exp(e));
            }
            break;
        }
        case FreqKind::Random: {
            CounterRng rng(spec.seed);
            for (int i = 0; i < M; ++i) seq.values.push_back(DD(2.0 * rng.uniform01(i)));
            break;
        }
        case FreqKind::Constant:
            for (int i = 0; i < M; ++i) seq.values.push_back(DD(spec.constant));
            break;
        case FreqKind::File:
            seq.values = read_freq_file(spec.path, M);
            break;
    }
    return seq;
}

FrequencySpec parse_freq_spec(const std::string& text) {
    FrequencySpec spec;
    spec.text = text;
    auto starts = [&](const char* p) { return text.rfind(p, 0) == 0; };
    try {
        if (starts("ialpha:")) {
            spec.kind = FreqKind::IAlpha;
            std::string arg = text.substr(7);
            spec.alpha = (arg == "sqrt2") ? dd::sqrt(DD(2.0)) : dd::from_string(arg);
        } else if (text == "sqrti") {
            spec.kind = FreqKind::SqrtI;
        } else if (starts("power:")) {
            spec.kind = FreqKind::Power;
            std::string rest = text.substr(6);
            auto colon = rest.find(':');
            if (colon == std::string::npos) throw std::invalid_argument("power needs two args");
            spec.alpha = dd::from_string(rest.substr(0, colon));
            spec.beta = dd::from_string(rest.substr(colon + 1)).to_double();
        } else if (starts("random:seed=")) {
            spec.kind = FreqKind::Random;
            spec.seed = std::stoull(text.substr(12));
        } else if (starts("constant:")) {
            spec.kind = FreqKind::Constant;
            spec.constant = dd::from_string(text.substr(9)).to_double();
        } else if (starts("file:")) {
            spec.kind = FreqKind::File;
            spec.path = text.substr(5);
        } else {
            throw std::invalid_argument("unknown kind");
        }
    } catch (const std::invalid_argument&) {
        throw input_error("bad frequency spec '" + text +
                          "' (expected ialpha:<v|sqrt2> | sqrti | power:<a>:<b> | "
                          "random:seed=<u64> | constant:<v> | file:<path>)");
    }
    return spec;
}

} // namespace skewlab
