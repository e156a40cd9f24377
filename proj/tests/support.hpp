#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <random>

#include <nlohmann/json.hpp>

#include "fgld/report.hpp"

namespace fgld {

inline void PrintTo(const USeries& s, std::ostream* os) { *os << s.render(); }
inline void PrintTo(const DvrElement& e, std::ostream* os) { *os << e.render(); }

}  // namespace fgld

namespace fgld::test_support {

inline nlohmann::json load_golden(const std::string& name) {
    std::ifstream in(std::filesystem::path(FGLD_GOLDEN_DIR) / name);
    if (!in) throw std::runtime_error("missing golden " + name);
    return nlohmann::json::parse(in);
}

/// The (p, n) pipeline up to nbar, built once per test binary.
inline const NbarContext& context(unsigned p, int n) {
    static std::map<std::pair<unsigned, int>, std::unique_ptr<NbarContext>> cache;
    auto& slot = cache[{p, n}];
    if (!slot) slot = std::make_unique<NbarContext>(build_nbar_context(ChromaticConfig::make(p, n)));
    return *slot;
}

inline USeries random_useries(std::mt19937_64& rng, unsigned p, int prec) {
    std::vector<std::uint32_t> c(static_cast<std::size_t>(prec));
    for (auto& x : c) x = static_cast<std::uint32_t>(rng() % p);
    return {p, c};
}

inline DvrElement random_element(std::mt19937_64& rng, const DvrRing& R) {
    std::vector<USeries> c;
    for (int i = 0; i < R.d(); ++i) c.push_back(random_useries(rng, R.prime(), R.precision()));
    return c;
}

}  // namespace fgld::test_support
