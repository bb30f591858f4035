#ifndef EVALSIM_MODEL_JSON_HPP_
#define EVALSIM_MODEL_JSON_HPP_

#include <string>

#include <nlohmann/json_fwd.hpp>

#include "evalsim/embedding.hpp"
#include "evalsim/fitting.hpp"
#include "evalsim/generators.hpp"
#include "evalsim/rules.hpp"

namespace evalsim {

// All decoders throw DomainError naming the offending JSON field.

struct DecodeOptions {
    // Clip the eigenvalues of user-supplied copula correlation matrices
    // at 1e-8 and rescale, instead of rejecting semidefinite input.
    bool repair_correlation = false;
};

nlohmann::json marginal_to_json(const Marginal& marginal);
Marginal marginal_from_json(const nlohmann::json& j);

nlohmann::json dependence_to_json(const Dependence& dependence);
Dependence dependence_from_json(const nlohmann::json& j, const DecodeOptions& options = {});

nlohmann::json model_to_json(const GeneratorModel& model);
GeneratorModel model_from_json(const nlohmann::json& j, const DecodeOptions& options = {});

nlohmann::json link_to_json(const LinkFunction& link);
LinkFunction link_from_json(const nlohmann::json& j);

nlohmann::json fit_report_to_json(const FitReport& report);

nlohmann::json election_result_to_json(const ElectionResult& result);

nlohmann::json latent_to_json(const LatentDistribution& dist);

nlohmann::json embedding_solution_to_json(const EmbeddingSolution& solution);

// Canonical serialization used for every JSON file the toolkit writes:
// 2-space indent, sorted object keys, trailing newline.
std::string to_json_text(const nlohmann::json& j);

}  // namespace evalsim

#endif  // EVALSIM_MODEL_JSON_HPP_
