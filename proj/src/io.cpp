#include "chansim/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace chansim::io {

using nlohmann::json;

std::string format_g9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return std::string(buf);
}

std::vector<double> parse_grid(const std::string& text) {
  double start = 0.0, stop = 0.0;
  int count = 0;
  char extra = 0;
  if (std::sscanf(text.c_str(), "%lf:%lf:%d%c", &start, &stop, &count, &extra) != 3) {
    throw ValidationError("grid: expected start:stop:count, got '" + text + "'");
  }
  if (count < 1) throw ValidationError("grid: count must be >= 1");
  if (count == 1) {
    if (start != stop) throw ValidationError("grid: count 1 requires start == stop");
    return {start};
  }
  std::vector<double> grid(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    grid[static_cast<std::size_t>(k)] = start + (stop - start) * k / (count - 1);
  }
  grid.back() = stop;
  return grid;
}

namespace {

void require_keys(const json& j, std::initializer_list<const char*> keys, const char* what) {
  if (!j.is_object()) throw ValidationError(std::string(what) + ": expected a JSON object");
  for (const char* k : keys) {
    if (!j.contains(k)) throw ValidationError(std::string(what) + ": missing field \"" + k + "\"");
  }
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : keys) {
      if (it.key() == k) {
        known = true;
        break;
      }
    }
    if (!known) throw ValidationError(std::string(what) + ": unknown field \"" + it.key() + "\"");
  }
}

std::vector<double> doubles_from(const json& j, const char* what) {
  if (!j.is_array()) throw ValidationError(std::string(what) + ": expected an array");
  std::vector<double> v;
  v.reserve(j.size());
  for (const auto& e : j) {
    if (!e.is_number()) throw ValidationError(std::string(what) + ": non-numeric entry");
    v.push_back(e.get<double>());
  }
  return v;
}

std::vector<int> ints_from(const json& j, const char* what) {
  if (!j.is_array()) throw ValidationError(std::string(what) + ": expected an array");
  std::vector<int> v;
  v.reserve(j.size());
  for (const auto& e : j) {
    if (!e.is_number_integer()) throw ValidationError(std::string(what) + ": non-integer entry");
    v.push_back(e.get<int>());
  }
  return v;
}

}  // namespace

Pmf pmf_from_json(const json& j) {
  require_keys(j, {"probs"}, "pmf");
  return Pmf::validated(doubles_from(j.at("probs"), "pmf.probs"));
}

json pmf_to_json(const Pmf& p) { return json{{"probs", p.probs()}}; }

Channel channel_from_json(const json& j) {
  require_keys(j, {"kernel"}, "channel");
  const json& rows = j.at("kernel");
  if (!rows.is_array() || rows.empty()) throw ValidationError("channel.kernel: expected rows");
  std::vector<std::vector<double>> parsed;
  for (const auto& row : rows) parsed.push_back(doubles_from(row, "channel.kernel row"));
  return Channel::from_rows(parsed);
}

json channel_to_json(const Channel& c) {
  json rows = json::array();
  for (int r = 0; r < c.input_size(); ++r) {
    json row = json::array();
    for (int s = 0; s < c.output_size(); ++s) row.push_back(c.at(r, s));
    rows.push_back(std::move(row));
  }
  return json{{"kernel", std::move(rows)}};
}

JointDist joint_from_json(const json& j) {
  require_keys(j, {"shape", "probs"}, "joint");
  return JointDist::validated(ints_from(j.at("shape"), "joint.shape"),
                              doubles_from(j.at("probs"), "joint.probs"));
}

json joint_to_json(const JointDist& d) {
  return json{{"shape", d.shape()}, {"probs", d.probs()}};
}

TripleDist triple_from_json(const json& j) {
  require_keys(j, {"pU", "pXgU", "pYgU"}, "triple");
  return TripleDist(pmf_from_json(j.at("pU")), channel_from_json(j.at("pXgU")),
                    channel_from_json(j.at("pYgU")));
}

json triple_to_json(const TripleDist& t) {
  return json{{"pU", pmf_to_json(t.pu())},
              {"pXgU", channel_to_json(t.x_given_u())},
              {"pYgU", channel_to_json(t.y_given_u())}};
}

sim::Codebook codebook_from_json(const json& j) {
  require_keys(j, {"n", "r1", "r2", "seed", "words"}, "codebook");
  if (!j.at("n").is_number_integer()) throw ValidationError("codebook.n: expected an integer");
  int n = j.at("n").get<int>();
  double r1 = j.at("r1").get<double>();
  double r2 = j.at("r2").get<double>();
  std::uint64_t seed = j.at("seed").get<std::uint64_t>();
  const json& words = j.at("words");
  if (!words.is_array()) throw ValidationError("codebook.words: expected an array of words");
  std::vector<std::vector<int>> parsed;
  int u_alphabet = 1;
  for (const auto& w : words) {
    parsed.push_back(ints_from(w, "codebook word"));
    for (int s : parsed.back()) u_alphabet = std::max(u_alphabet, s + 1);
  }
  return sim::codebook_from_words(n, r1, r2, u_alphabet, parsed, seed);
}

json codebook_to_json(const sim::Codebook& cb) {
  json words = json::array();
  for (int m = 0; m < cb.flat_count(); ++m) {
    json w = json::array();
    for (int k = 0; k < cb.n; ++k) w.push_back(cb.word_flat(m, k));
    words.push_back(std::move(w));
  }
  return json{{"n", cb.n}, {"r1", cb.r1}, {"r2", cb.r2}, {"seed", cb.seed}, {"words", std::move(words)}};
}

game::Game game_from_json(const json& j) {
  require_keys(j, {"sizes", "payoff"}, "game");
  std::vector<int> sizes = ints_from(j.at("sizes"), "game.sizes");
  if (sizes.size() != 3) throw ValidationError("game.sizes: expected [|X|,|Y|,|Z|]");
  return game::Game::validated(sizes[0], sizes[1], sizes[2],
                               doubles_from(j.at("payoff"), "game.payoff"));
}

json game_to_json(const game::Game& g) {
  return json{{"sizes", {g.x_size, g.y_size, g.z_size}}, {"payoff", g.payoff}};
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(path + ": cannot open file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    std::ostringstream os;
    os << path << ": " << e.what();
    throw ValidationError(os.str());
  }
}

void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError(path + ": cannot open for writing");
  out << contents;
  if (!out) throw ValidationError(path + ": write failed");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError(path + ": cannot open file");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace chansim::io
