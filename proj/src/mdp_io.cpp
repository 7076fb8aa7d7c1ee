#include "rmdp/mdp_io.hpp"

#include "rmdp/errors.hpp"

#include <set>
#include <string>

namespace rmdp {

nlohmann::json mdp_to_json(const TabularMdp& mdp) {
    std::vector<std::size_t> absorbing;
    for (StateIndex s = 0; s < mdp.n_states(); ++s) {
        if (mdp.is_absorbing(s)) absorbing.push_back(s);
    }
    return nlohmann::json{{"n_states", mdp.n_states()},
                          {"n_actions", mdp.n_actions()},
                          {"transition", mdp.transition_data()},
                          {"reward", mdp.reward_data()},
                          {"discount", mdp.discount()},
                          {"start_state", mdp.start_state()},
                          {"absorbing", absorbing}};
}

TabularMdp mdp_from_json(const nlohmann::json& j) {
    static const std::set<std::string> kFields{"n_states", "n_actions", "transition", "reward",
                                               "discount", "start_state", "absorbing"};
    if (!j.is_object()) {
        throw UsageError("MDP document must be a JSON object");
    }
    for (const auto& [key, _] : j.items()) {
        if (!kFields.contains(key)) {
            throw UsageError("unknown MDP field '" + key + "'");
        }
    }
    for (const auto& field : kFields) {
        if (!j.contains(field)) {
            throw UsageError("MDP field '" + field + "' is missing");
        }
    }
    try {
        const auto ns = j.at("n_states").get<std::size_t>();
        std::vector<bool> absorbing(ns, false);
        for (auto s : j.at("absorbing").get<std::vector<std::size_t>>()) {
            if (s >= ns) throw UsageError("absorbing state index out of range");
            absorbing[s] = true;
        }
        return TabularMdp(ns, j.at("n_actions").get<std::size_t>(),
                          j.at("transition").get<std::vector<double>>(),
                          j.at("reward").get<std::vector<double>>(), j.at("discount").get<double>(),
                          j.at("start_state").get<std::size_t>(), std::move(absorbing));
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(std::string("malformed MDP document: ") + e.what());
    }
}

}  // namespace rmdp
