#include "specres/io.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>

namespace specres {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path);
    if (!os) fail_config("cannot open output file '" + path + "'");
    os << std::setprecision(17);
    return os;
}

}  // namespace

void write_trace_csv(const BoundaryTrace& trace, const std::string& path) {
    auto os = open_out(path);
    os << "E,ReF,ImF";
    for (std::size_t k = 1; k <= trace.derivatives.size(); ++k)
        os << ",ReF" << k << ",ImF" << k;
    os << "\n";
    for (Eigen::Index j = 0; j < trace.grid.size(); ++j) {
        os << trace.grid(j) << "," << trace.values(j).real() << "," << trace.values(j).imag();
        for (const auto& dk : trace.derivatives)
            os << "," << dk(j).real() << "," << dk(j).imag();
        os << "\n";
    }
}

void write_survival_csv(const SurvivalSeries& series, const std::string& path) {
    auto os = open_out(path);
    os << "t,ReS,ImS,absS\n";
    for (Eigen::Index i = 0; i < series.times.size(); ++i) {
        const cxd s = series.values(i);
        os << series.times(i) << "," << s.real() << "," << s.imag() << "," << std::abs(s)
           << "\n";
    }
}

ordered_json resonance_json(const Resonance& res) {
    ordered_json j;
    j["kappa"] = res.kappa;
    j["re_lambda"] = res.lambda_res.real();
    j["im_lambda"] = res.lambda_res.imag();
    j["gamma"] = res.gamma_fgr;
    j["re_a"] = res.amplitude.real();
    j["im_a"] = res.amplitude.imag();
    j["gap"] = res.expansion_gap;
    return j;
}

void append_resonance_jsonl(const Resonance& res, std::ostream& os) {
    os << resonance_json(res).dump() << "\n";
}

void write_json(const ordered_json& j, const std::string& path) {
    auto os = open_out(path);
    os << j.dump(2) << "\n";
}

ordered_json read_json(const std::string& path) {
    std::ifstream is(path);
    if (!is) fail_config("cannot open JSON file '" + path + "'");
    ordered_json j;
    try {
        is >> j;
    } catch (const nlohmann::json::exception& e) {
        fail_config("JSON parse error in '" + path + "': " + e.what());
    }
    return j;
}

void ensure_directory(const std::string& path) {
    std::error_code ec;
    std::filesystem::create_directories(path, ec);
    if (ec) fail_config("cannot create output directory '" + path + "': " + ec.message());
}

}  // namespace specres
