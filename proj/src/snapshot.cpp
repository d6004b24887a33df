#include "hatch/snapshot.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "hatch/errors.hpp"
#include "json_util.hpp"

namespace hatch {

using nlohmann::json;
using detail::matrix_from_json;
using detail::matrix_to_json;
using detail::vector_from_json;
using detail::vector_to_json;

namespace {

constexpr const char* kFormatTag = "hatch-policy-snapshot";
constexpr int kSnapshotVersion = 1;

json ridge_to_json(const RidgeModelXd& m) {
  json j;
  j["dim"] = m.dim;
  j["lambda"] = m.lambda;
  j["gram"] = matrix_to_json(m.gram);
  j["gram_inv"] = matrix_to_json(m.gram_inv);
  j["moment"] = vector_to_json(m.moment);
  j["coef"] = vector_to_json(m.coef);
  j["n_obs"] = m.n_obs;
  j["log_det_ratio"] = m.log_det_ratio;
  j["updates_since_refactor"] = m.updates_since_refactor;
  return j;
}

RidgeModelXd ridge_from_json(const json& j) {
  RidgeModelXd m;
  m.dim = j.at("dim").get<Eigen::Index>();
  m.lambda = j.at("lambda").get<double>();
  m.gram = matrix_from_json(j.at("gram"));
  m.gram_inv = matrix_from_json(j.at("gram_inv"));
  m.moment = vector_from_json(j.at("moment"));
  m.coef = vector_from_json(j.at("coef"));
  m.n_obs = j.at("n_obs").get<std::int64_t>();
  m.log_det_ratio = j.at("log_det_ratio").get<double>();
  m.updates_since_refactor = j.at("updates_since_refactor").get<std::int64_t>();
  if (m.dim < 1 || m.gram.rows() != m.dim || m.gram.cols() != m.dim ||
      m.gram_inv.rows() != m.dim || m.gram_inv.cols() != m.dim ||
      m.moment.size() != m.dim || m.coef.size() != m.dim)
    throw format_error("snapshot: ridge model dimensions are inconsistent");
  return m;
}

json config_to_json(const PolicyConfig& config) {
  json j;
  j["policy_kind"] = to_string(config.policy_kind);
  j["lambda"] = config.lambda;
  j["delta"] = config.delta;
  if (config.alpha_override)
    j["alpha_override"] = *config.alpha_override;
  else
    j["alpha_override"] = nullptr;
  j["alpha_tilde_mode"] = to_string(config.alpha_tilde_mode);
  j["seed"] = config.seed;
  return j;
}

PolicyConfig config_from_json(const json& j) {
  PolicyConfig config;
  config.policy_kind = policy_kind_from_string(j.at("policy_kind").get<std::string>());
  config.lambda = j.at("lambda").get<double>();
  config.delta = j.at("delta").get<double>();
  if (!j.at("alpha_override").is_null())
    config.alpha_override = j.at("alpha_override").get<double>();
  config.alpha_tilde_mode =
      alpha_tilde_mode_from_string(j.at("alpha_tilde_mode").get<std::string>());
  config.seed = j.at("seed").get<std::uint64_t>();
  return config;
}

json budget_to_json(const BudgetState& b) {
  return json{{"total_budget", b.total_budget},
              {"horizon", b.horizon},
              {"remaining_budget", b.remaining_budget},
              {"remaining_time", b.remaining_time}};
}

BudgetState budget_from_json(const json& j) {
  BudgetState b;
  b.total_budget = j.at("total_budget").get<std::int64_t>();
  b.horizon = j.at("horizon").get<std::int64_t>();
  b.remaining_budget = j.at("remaining_budget").get<std::int64_t>();
  b.remaining_time = j.at("remaining_time").get<std::int64_t>();
  if (b.remaining_budget < 0 || b.remaining_budget > b.total_budget ||
      b.remaining_time < 0 || b.remaining_time > b.horizon)
    throw format_error("snapshot: budget state out of range");
  return b;
}

json profiles_to_json(const std::vector<ClassProfile>& profiles) {
  json out = json::array();
  for (const ClassProfile& p : profiles) {
    out.push_back(json{{"class_id", p.class_id},
                       {"center", vector_to_json(p.center)},
                       {"phi", p.phi}});
  }
  return out;
}

std::vector<ClassProfile> profiles_from_json(const json& j) {
  std::vector<ClassProfile> profiles;
  for (const json& pj : j) {
    ClassProfile p;
    p.class_id = pj.at("class_id").get<int>();
    p.center = vector_from_json(pj.at("center"));
    p.phi = pj.at("phi").get<double>();
    profiles.push_back(std::move(p));
  }
  return profiles;
}

}  // namespace

// Snapshot access to the policies' private run state.
class PolicyCodec {
 public:
  static json encode(const Policy& policy) {
    json j;
    j["format"] = kFormatTag;
    j["version"] = kSnapshotVersion;
    j["budget"] = budget_to_json(policy.budget());
    j["dim"] = policy.context_dim();
    j["n_arms"] = policy.n_arms();
    switch (policy.kind()) {
      case PolicyKind::kHatch: {
        const auto& p = static_cast<const HatchPolicy&>(policy);
        j["config"] = config_to_json(p.config);
        j["rng"] = p.rng.serialize();
        j["profiles"] = profiles_to_json(p.alloc.profiles);
        j["value_estimates"] = vector_to_json(p.alloc.value_estimates);
        j["alpha_tilde"] = p.alloc.alpha_tilde;
        json class_models = json::array();
        for (const RidgeModelXd& m : p.alloc.class_models)
          class_models.push_back(ridge_to_json(m));
        j["class_models"] = std::move(class_models);
        json arm_models = json::array();
        for (const RidgeModelXd& m : p.arm_models) arm_models.push_back(ridge_to_json(m));
        j["arm_models"] = std::move(arm_models);
        break;
      }
      case PolicyKind::kGreedyLinUcb:
      case PolicyKind::kRandomLinUcb: {
        const auto& p = static_cast<const FlatLinUcbPolicy&>(policy);
        j["config"] = config_to_json(p.config);
        j["rng"] = p.rng.serialize();
        json arm_models = json::array();
        for (const RidgeModelXd& m : p.arm_models) arm_models.push_back(ridge_to_json(m));
        j["arm_models"] = std::move(arm_models);
        break;
      }
      case PolicyKind::kClusterUcbAlp: {
        const auto& p = static_cast<const ClusterUcbAlpPolicy&>(policy);
        j["config"] = config_to_json(p.config);
        j["rng"] = p.rng.serialize();
        j["phi"] = vector_to_json(p.phi);
        j["class_pulls"] = vector_to_json(p.class_pulls);
        j["class_reward_sum"] = vector_to_json(p.class_reward_sum);
        j["arm_pulls"] = matrix_to_json(p.arm_pulls);
        j["arm_reward_sum"] = matrix_to_json(p.arm_reward_sum);
        break;
      }
    }
    return j;
  }

  static std::unique_ptr<Policy> decode(const json& j) {
    const PolicyConfig config = config_from_json(j.at("config"));
    const BudgetState budget = budget_from_json(j.at("budget"));

    PolicySetup setup;
    setup.dim = j.at("dim").get<int>();
    setup.n_arms = j.at("n_arms").get<int>();
    setup.total_budget = budget.total_budget;
    setup.horizon = budget.horizon;

    switch (config.policy_kind) {
      case PolicyKind::kHatch: {
        setup.profiles = profiles_from_json(j.at("profiles"));
        for (const ClassProfile& p : setup.profiles)
          if (p.center.size() != setup.dim)
            throw format_error("snapshot: profile dimension mismatch");
        auto policy = std::make_unique<HatchPolicy>(config, setup);
        policy->alloc.value_estimates = vector_from_json(j.at("value_estimates"));
        policy->alloc.alpha_tilde = j.at("alpha_tilde").get<double>();
        restore_models(j.at("class_models"), setup.dim, policy->alloc.class_models);
        restore_models(j.at("arm_models"), setup.dim, policy->arm_models);
        if (policy->alloc.value_estimates.size() !=
            static_cast<Eigen::Index>(setup.profiles.size()))
          throw format_error("snapshot: value estimate count mismatch");
        policy->budget_ = budget;
        policy->rng = Rng::deserialize(j.at("rng").get<std::string>());
        return policy;
      }
      case PolicyKind::kGreedyLinUcb:
      case PolicyKind::kRandomLinUcb: {
        auto policy = std::make_unique<FlatLinUcbPolicy>(config, setup);
        restore_models(j.at("arm_models"), setup.dim, policy->arm_models);
        policy->budget_ = budget;
        policy->rng = Rng::deserialize(j.at("rng").get<std::string>());
        return policy;
      }
      case PolicyKind::kClusterUcbAlp: {
        const Eigen::VectorXd phi = vector_from_json(j.at("phi"));
        setup.profiles.reserve(static_cast<std::size_t>(phi.size()));
        for (Eigen::Index c = 0; c < phi.size(); ++c) {
          ClassProfile p;  // centers are unused by the count-based policy
          p.class_id = static_cast<int>(c);
          p.center = Eigen::VectorXd::Zero(setup.dim);
          p.phi = phi[c];
          setup.profiles.push_back(std::move(p));
        }
        auto policy = std::make_unique<ClusterUcbAlpPolicy>(config, setup);
        policy->phi = phi;
        policy->class_pulls = vector_from_json(j.at("class_pulls"));
        policy->class_reward_sum = vector_from_json(j.at("class_reward_sum"));
        policy->arm_pulls = matrix_from_json(j.at("arm_pulls"));
        policy->arm_reward_sum = matrix_from_json(j.at("arm_reward_sum"));
        if (policy->class_pulls.size() != phi.size() ||
            policy->arm_pulls.rows() != phi.size() ||
            policy->arm_pulls.cols() != setup.n_arms)
          throw format_error("snapshot: count table dimensions mismatch");
        policy->budget_ = budget;
        policy->rng = Rng::deserialize(j.at("rng").get<std::string>());
        return policy;
      }
    }
    throw format_error("snapshot: unknown policy kind");
  }

 private:
  static void restore_models(const json& j, int dim, std::vector<RidgeModelXd>& models) {
    if (j.size() != models.size()) throw format_error("snapshot: model count mismatch");
    for (std::size_t i = 0; i < models.size(); ++i) {
      models[i] = ridge_from_json(j[i]);
      if (models[i].dim != dim) throw format_error("snapshot: model dimension mismatch");
    }
  }
};

void save_policy(const std::filesystem::path& path, const Policy& policy) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot write policy snapshot: " + path.string());
  out << PolicyCodec::encode(policy).dump(2) << '\n';
  if (!out) throw io_error("failed writing policy snapshot: " + path.string());
}

std::unique_ptr<Policy> load_policy(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot read policy snapshot: " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw format_error("policy snapshot: invalid json: " + std::string(e.what()));
  }
  try {
    if (j.at("format") != kFormatTag)
      throw format_error("policy snapshot: wrong format tag");
    if (j.at("version") != kSnapshotVersion)
      throw format_error("policy snapshot: unsupported version");
    return PolicyCodec::decode(j);
  } catch (const json::exception& e) {
    throw format_error("policy snapshot: missing field: " + std::string(e.what()));
  }
}

}  // namespace hatch
