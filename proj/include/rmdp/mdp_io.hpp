#pragma once

// JSON form of a TabularMdp:
//
//   {
//     "n_states": 3, "n_actions": 2,
//     "transition": [...],   // n_states*n_actions*n_states, row-major (s, a, s')
//     "reward": [...],       // same layout
//     "discount": 0.95,
//     "start_state": 0,
//     "absorbing": [2]       // indices of absorbing states
//   }

#include "rmdp/mdp.hpp"

#include <json.hpp>

namespace rmdp {

nlohmann::json mdp_to_json(const TabularMdp& mdp);

/// Throws UsageError on missing or unknown fields and on invariant violations.
TabularMdp mdp_from_json(const nlohmann::json& j);

}  // namespace rmdp
