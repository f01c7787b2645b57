#include <clocale>
#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "chansim/bec.hpp"
#include "chansim/channel_sim.hpp"
#include "chansim/game.hpp"
#include "chansim/io.hpp"
#include "chansim/rate_region.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

constexpr int kExitValidation = 2;
constexpr int kExitCapExceeded = 3;
constexpr int kExitInternalCheck = 4;

using chansim::io::format_g9;

std::string command_echo(int argc, char** argv) {
  std::ostringstream os;
  for (int i = 1; i < argc; ++i) os << (i > 1 ? " " : "") << argv[i];
  return os.str();
}

std::string csv_header(const std::string& echo, std::uint64_t seed) {
  std::ostringstream os;
  os << "# chansim " << kVersion << "\n";
  os << "# command: " << echo << "\n";
  os << "# seed: " << seed << "\n";
  return os.str();
}

nlohmann::json json_meta(const std::string& echo, std::uint64_t seed) {
  return nlohmann::json{{"version", kVersion}, {"command", echo}, {"seed", seed}};
}

struct CommonArgs {
  std::string out;
  std::uint64_t seed = 1;
};

int run_region(const std::string& source_path, const std::string& channel_path,
               const std::string& r2_grid, int u_card, int restarts, const CommonArgs& common,
               const std::string& echo) {
  chansim::Pmf source = chansim::io::pmf_from_json(chansim::io::load_json_file(source_path));
  chansim::Channel channel =
      chansim::io::channel_from_json(chansim::io::load_json_file(channel_path));
  std::optional<int> u = u_card > 0 ? std::optional<int>(u_card) : std::nullopt;
  chansim::ProblemSpec spec = chansim::ProblemSpec::make(source, channel, u);

  chansim::OptimizerOptions opts;
  opts.restarts = restarts;
  opts.seed = common.seed;
  std::vector<double> grid = chansim::io::parse_grid(r2_grid);
  chansim::BoundaryCurve curve = chansim::boundary_curve(spec, grid, opts);

  std::ostringstream csv;
  csv << csv_header(echo, common.seed);
  csv << "r2,r1,i_xu,i_xyu,marginal_gap,restarts_used\n";
  nlohmann::json certs = nlohmann::json::array();
  for (const chansim::BoundaryPoint& pt : curve.points) {
    csv << format_g9(pt.point.r2) << "," << format_g9(pt.point.r1) << ","
        << format_g9(pt.cert.i_xu) << "," << format_g9(pt.cert.i_xyu) << ","
        << format_g9(pt.cert.marginal_gap) << "," << pt.restarts_used << "\n";
    if (pt.repaired) csv << "# repair: r2=" << format_g9(pt.point.r2) << "\n";
    nlohmann::json c = chansim::io::triple_to_json(pt.cert.triple);
    c["r1"] = pt.point.r1;
    c["r2"] = pt.point.r2;
    c["i_xu"] = pt.cert.i_xu;
    c["i_xyu"] = pt.cert.i_xyu;
    c["marginal_gap"] = pt.cert.marginal_gap;
    c["repaired"] = pt.repaired;
    certs.push_back(std::move(c));
  }
  chansim::io::write_text_file(common.out, csv.str());

  nlohmann::json side = json_meta(echo, common.seed);
  side["certificates"] = std::move(certs);
  chansim::io::write_text_file(common.out + ".certs.json", side.dump(2) + "\n");
  return 0;
}

int run_bec(double pe, int grid_count, const CommonArgs& common, const std::string& echo) {
  if (grid_count < 1) throw chansim::ValidationError("bec: --grid must be >= 1");
  std::vector<chansim::bec::BoundaryRow> rows = chansim::bec::boundary_trace(pe, grid_count);

  std::ostringstream csv;
  csv << csv_header(echo, common.seed);
  csv << "p2,p1,i_xu,i_xyu,r1,r2\n";
  for (const auto& row : rows) {
    csv << format_g9(row.p2) << "," << format_g9(row.p1) << "," << format_g9(row.i_xu) << ","
        << format_g9(row.i_xyu) << "," << format_g9(row.r1) << "," << format_g9(row.r2) << "\n";
  }
  chansim::io::write_text_file(common.out, csv.str());
  return 0;
}

int run_simulate(const std::string& triple_path, double r1, double r2, std::vector<int> n_list,
                 int num_seeds, const std::string& v_mode, bool exact, std::uint64_t cap_enum,
                 std::uint64_t cap_words, const CommonArgs& common, const std::string& echo) {
  chansim::TripleDist pstar =
      chansim::io::triple_from_json(chansim::io::load_json_file(triple_path));
  if (n_list.empty()) throw chansim::ValidationError("simulate: at least one --n required");
  if (num_seeds < 1) throw chansim::ValidationError("simulate: --seeds must be >= 1");

  chansim::sim::Caps caps;
  caps.max_enum_cells = cap_enum;
  caps.max_joint_cells = cap_enum;
  caps.max_codewords = cap_words;

  // Soft-covering view: V = X, Y, or the (X,Y) pair.
  chansim::Channel v_kernel;
  chansim::Pmf v_target;
  if (!exact) {
    if (v_mode == "x") {
      v_kernel = pstar.x_given_u();
    } else if (v_mode == "y") {
      v_kernel = pstar.y_given_u();
    } else if (v_mode == "xy") {
      int nx = pstar.x_size(), ny = pstar.y_size(), nu = pstar.u_size();
      std::vector<double> k(static_cast<std::size_t>(nu) * nx * ny);
      for (int u = 0; u < nu; ++u) {
        for (int x = 0; x < nx; ++x) {
          for (int y = 0; y < ny; ++y) {
            k[(static_cast<std::size_t>(u) * nx + x) * ny + y] =
                pstar.x_given_u().at(u, x) * pstar.y_given_u().at(u, y);
          }
        }
      }
      v_kernel = chansim::Channel::validated(nu, nx * ny, std::move(k));
    } else {
      throw chansim::ValidationError("simulate: --v must be one of x, y, xy");
    }
    std::vector<double> flat(static_cast<std::size_t>(v_kernel.output_size()), 0.0);
    for (int u = 0; u < pstar.u_size(); ++u) {
      for (int s = 0; s < v_kernel.output_size(); ++s) {
        flat[static_cast<std::size_t>(s)] += pstar.pu().at(u) * v_kernel.at(u, s);
      }
    }
    v_target = chansim::Pmf::from_weights(flat);
  }

  std::ostringstream csv;
  csv << csv_header(echo, common.seed);
  csv << "seed,n,r1,r2,tv\n";
  for (int n : n_list) {
    double sum = 0.0, sumsq = 0.0;
    for (int s = 0; s < num_seeds; ++s) {
      std::uint64_t draw_seed =
          chansim::RandomStream(common.seed,
                                (static_cast<std::uint64_t>(n) << 32) | static_cast<std::uint64_t>(s))
              .next_u64();
      double tv = 0.0;
      if (exact) {
        chansim::sim::SimulationCode code =
            chansim::sim::make_simulation_code(pstar, n, r1, r2, draw_seed, caps);
        tv = chansim::sim::induced_distribution_exact(code, caps).epsilon;
      } else {
        chansim::sim::Codebook cb =
            chansim::sim::draw_codebook(pstar.pu(), n, r1, r2, draw_seed, caps);
        tv = chansim::sim::softcover_tv(cb, v_kernel, v_target, caps);
      }
      csv << draw_seed << "," << n << "," << format_g9(r1) << "," << format_g9(r2) << ","
          << format_g9(tv) << "\n";
      sum += tv;
      sumsq += tv * tv;
    }
    double mean = sum / num_seeds;
    double var = num_seeds > 1 ? (sumsq - num_seeds * mean * mean) / (num_seeds - 1) : 0.0;
    double se = num_seeds > 1 ? std::sqrt(std::max(var, 0.0) / num_seeds) : 0.0;
    csv << "# n=" << n << " mean=" << format_g9(mean) << " se=" << format_g9(se) << "\n";
  }
  chansim::io::write_text_file(common.out, csv.str());
  return 0;
}

int run_game(const std::string& game_path, const std::string& theta_grid,
             const CommonArgs& common, const std::string& echo) {
  chansim::game::Game g = chansim::io::game_from_json(chansim::io::load_json_file(game_path));
  chansim::game::GameOptions opts;
  opts.seed = common.seed;
  opts.wyner.seed = common.seed;
  std::vector<double> grid = chansim::io::parse_grid(theta_grid);
  std::vector<chansim::game::R0CurvePoint> points = chansim::game::r0_curve(g, grid, opts);

  std::ostringstream csv;
  csv << csv_header(echo, common.seed);
  csv << "theta,rate,w_support,repair_flag\n";
  nlohmann::json certs = nlohmann::json::array();
  for (const auto& pt : points) {
    int flag = pt.feasible ? (pt.repaired ? 1 : 0) : 2;
    csv << format_g9(pt.theta) << "," << format_g9(pt.rate) << "," << pt.w_support << "," << flag
        << "\n";
    nlohmann::json c;
    c["theta"] = pt.theta;
    c["feasible"] = pt.feasible;
    if (pt.strategy) {
      c["rate"] = pt.rate;
      c["pW"] = chansim::io::pmf_to_json(pt.strategy->pw);
      nlohmann::json strategies = nlohmann::json::array();
      for (const auto& s : pt.strategy->strategies) {
        strategies.push_back(chansim::io::joint_to_json(s));
      }
      c["strategies"] = std::move(strategies);
    }
    certs.push_back(std::move(c));
  }
  chansim::io::write_text_file(common.out, csv.str());

  nlohmann::json side = json_meta(echo, common.seed);
  side["certificates"] = std::move(certs);
  chansim::io::write_text_file(common.out + ".certs.json", side.dump(2) + "\n");
  return 0;
}

int run_converse(const std::string& code_path, const std::string& triple_path,
                 std::uint64_t cap_enum, std::uint64_t cap_words, const CommonArgs& common,
                 const std::string& echo) {
  chansim::sim::Codebook cb =
      chansim::io::codebook_from_json(chansim::io::load_json_file(code_path));
  chansim::TripleDist pstar =
      chansim::io::triple_from_json(chansim::io::load_json_file(triple_path));
  if (cb.u_alphabet > pstar.u_size()) {
    throw chansim::ValidationError("converse: codebook uses symbols outside the triple's U alphabet");
  }
  cb.u_alphabet = pstar.u_size();

  chansim::sim::Caps caps;
  caps.max_joint_cells = cap_enum;
  caps.max_enum_cells = cap_enum;
  caps.max_codewords = cap_words;

  double r1 = cb.r1, r2 = cb.r2;
  chansim::sim::SimulationCode code = chansim::sim::make_simulation_code(pstar, std::move(cb));
  chansim::sim::InducedDist ind = chansim::sim::induced_distribution_exact(code, caps);
  chansim::sim::ConverseReport rep = chansim::sim::verify_converse(ind, r1, r2);

  nlohmann::json out = json_meta(echo, common.seed);
  out["n"] = rep.n;
  out["r1"] = rep.r1;
  out["r2"] = rep.r2;
  out["eff_r1"] = rep.eff_r1;
  out["eff_r2"] = rep.eff_r2;
  out["nominal_rates_exact"] = rep.nominal_rates_exact;
  out["epsilon"] = rep.epsilon;
  out["h_i"] = rep.h_i;
  out["h_ij"] = rep.h_ij;
  out["i_x_ij"] = rep.i_x_ij;
  out["i_xy_ij"] = rep.i_xy_ij;
  out["per_letter_i_xu"] = rep.per_letter_i_xu;
  out["per_letter_i_xyu"] = rep.per_letter_i_xyu;
  out["g_eps"] = rep.g_eps;
  out["s_eps_applicable"] = rep.s_eps_applicable;
  out["rate_chain_ok"] = rep.rate_chain_ok;
  out["sum_chain_ok"] = rep.sum_chain_ok;
  out["per_letter_ok"] = rep.per_letter_ok;
  chansim::io::write_text_file(common.out, out.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  std::setlocale(LC_ALL, "C");
  CLI::App app{"channel-simulation rate regions, soft-covering codes, and coordination games"};
  app.require_subcommand(1);

  std::string echo = command_echo(argc, argv);
  CommonArgs common;

  // region
  auto* region = app.add_subcommand("region", "numerical simulation rate region boundary");
  std::string source_path, channel_path, r2_grid;
  int u_card = 0, restarts = 64;
  region->add_option("--source", source_path, "source pmf JSON")->required();
  region->add_option("--channel", channel_path, "channel kernel JSON")->required();
  region->add_option("--r2-grid", r2_grid, "r2 grid start:stop:count")->required();
  region->add_option("--u-card", u_card, "auxiliary cardinality (default |X||Y|+1)");
  region->add_option("--restarts", restarts, "optimizer restarts");
  region->add_option("--seed", common.seed, "rng seed");
  region->add_option("--out", common.out, "output CSV path")->required();

  // bec
  auto* bec_cmd = app.add_subcommand("bec", "closed-form erasure-channel boundary");
  double pe = 0.75;
  int bec_grid = 50;
  bec_cmd->add_option("--pe", pe, "erasure probability")->required();
  bec_cmd->add_option("--grid", bec_grid, "number of p2 grid points");
  bec_cmd->add_option("--seed", common.seed, "rng seed (echoed only)");
  bec_cmd->add_option("--out", common.out, "output CSV path")->required();

  // simulate
  auto* simulate = app.add_subcommand("simulate", "soft-covering / exact-epsilon experiments");
  std::string triple_path, v_mode = "x";
  double r1 = 0.0, r2 = 0.0;
  std::vector<int> n_list;
  int num_seeds = 1;
  bool exact = false;
  std::uint64_t cap_enum = std::uint64_t{1} << 24;
  std::uint64_t cap_words = std::uint64_t{1} << 20;
  simulate->add_option("--triple", triple_path, "p* triple JSON")->required();
  simulate->add_option("--r1", r1, "description rate")->required();
  simulate->add_option("--r2", r2, "common-randomness rate");
  simulate->add_option("--n", n_list, "block lengths")->required()->delimiter(',');
  simulate->add_option("--seeds", num_seeds, "number of seeded codebooks");
  simulate->add_option("--seed", common.seed, "base rng seed");
  simulate->add_option("--v", v_mode, "soft-covering variable: x, y, or xy");
  simulate->add_flag("--exact", exact, "measure exact induced epsilon instead of softcover TV");
  simulate->add_option("--cap-enum", cap_enum, "enumeration cell cap");
  simulate->add_option("--cap-words", cap_words, "codeword cap");
  simulate->add_option("--out", common.out, "output CSV path")->required();

  // game
  auto* game_cmd = app.add_subcommand("game", "rate-payoff tradeoff R0(theta)");
  std::string game_path, theta_grid;
  game_cmd->add_option("--game", game_path, "payoff tensor JSON")->required();
  game_cmd->add_option("--theta-grid", theta_grid, "theta grid start:stop:count")->required();
  game_cmd->add_option("--seed", common.seed, "rng seed");
  game_cmd->add_option("--out", common.out, "output CSV path")->required();

  // converse
  auto* converse = app.add_subcommand("converse", "verify converse chain on an exact code");
  std::string code_path, conv_triple_path;
  std::uint64_t conv_cap_enum = std::uint64_t{1} << 24;
  std::uint64_t conv_cap_words = std::uint64_t{1} << 20;
  converse->add_option("--code", code_path, "codebook JSON")->required();
  converse->add_option("--triple", conv_triple_path, "p* triple JSON")->required();
  converse->add_option("--cap-enum", conv_cap_enum, "enumeration cell cap");
  converse->add_option("--cap-words", conv_cap_words, "codeword cap");
  converse->add_option("--seed", common.seed, "rng seed (echoed only)");
  converse->add_option("--out", common.out, "output JSON path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (region->parsed()) {
      return run_region(source_path, channel_path, r2_grid, u_card, restarts, common, echo);
    }
    if (bec_cmd->parsed()) return run_bec(pe, bec_grid, common, echo);
    if (simulate->parsed()) {
      return run_simulate(triple_path, r1, r2, n_list, num_seeds, v_mode, exact, cap_enum,
                          cap_words, common, echo);
    }
    if (game_cmd->parsed()) return run_game(game_path, theta_grid, common, echo);
    if (converse->parsed()) {
      return run_converse(code_path, conv_triple_path, conv_cap_enum, conv_cap_words, common, echo);
    }
  } catch (const chansim::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const chansim::CapExceededError& e) {
    std::cerr << "error: " << e.what() << "\n";
    std::cerr << "hint: reduce n or the rates, or raise --cap-enum/--cap-words\n";
    return kExitCapExceeded;
  } catch (const chansim::InternalCheckError& e) {
    std::cerr << "internal-consistency failure: " << e.what() << "\n";
    return kExitInternalCheck;
  }
  return kExitValidation;
}
