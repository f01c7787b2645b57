#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "chansim/channel_sim.hpp"
#include "chansim/game.hpp"
#include "chansim/prob.hpp"

namespace chansim::io {

// Locale-independent, 9-significant-digit decimal formatting for all CSV and
// JSON numeric output; reruns must be byte-identical.
std::string format_g9(double v);

// "start:stop:count" with inclusive endpoints.
std::vector<double> parse_grid(const std::string& text);

// Strict schemas: listed fields required, extra fields rejected.
Pmf pmf_from_json(const nlohmann::json& j);            // {"probs":[...]}
nlohmann::json pmf_to_json(const Pmf& p);
Channel channel_from_json(const nlohmann::json& j);    // {"kernel":[[...],...]}
nlohmann::json channel_to_json(const Channel& c);
JointDist joint_from_json(const nlohmann::json& j);    // {"shape":[...],"probs":[...]}
nlohmann::json joint_to_json(const JointDist& d);
TripleDist triple_from_json(const nlohmann::json& j);  // {"pU":...,"pXgU":...,"pYgU":...}
nlohmann::json triple_to_json(const TripleDist& t);
sim::Codebook codebook_from_json(const nlohmann::json& j);  // {n,r1,r2,seed,words}
nlohmann::json codebook_to_json(const sim::Codebook& cb);
game::Game game_from_json(const nlohmann::json& j);    // {"sizes":[...],"payoff":[...]}
nlohmann::json game_to_json(const game::Game& g);

// Parse failures carry the file name and byte position.
nlohmann::json load_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& contents);
std::string read_text_file(const std::string& path);

}  // namespace chansim::io
