#pragma once

#include "specres/decay.hpp"
#include "specres/feshbach.hpp"
#include "specres/resonance.hpp"

#include <nlohmann/json.hpp>

#include <string>

namespace specres {

using ordered_json = nlohmann::ordered_json;

/// CSV columns: E, ReF, ImF, then one (ReF^(k), ImF^(k)) pair per order.
void write_trace_csv(const BoundaryTrace& trace, const std::string& path);

/// CSV columns: t, ReS, ImS, absS.
void write_survival_csv(const SurvivalSeries& series, const std::string& path);

/// One JSON object per line: kappa, re_lambda, im_lambda, gamma, re_a, im_a, gap.
void append_resonance_jsonl(const Resonance& res, std::ostream& os);

ordered_json resonance_json(const Resonance& res);

void write_json(const ordered_json& j, const std::string& path);
ordered_json read_json(const std::string& path);

void ensure_directory(const std::string& path);

}  // namespace specres
