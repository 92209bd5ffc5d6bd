// convote — command-line front end: rank profiles, compare rules, export
// graphs, allocate seats, and run the negotiation / random-walk simulations.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "convote/convote.hpp"

namespace {

using namespace convote;

std::string read_input(const std::string& path) {
    if (path == "-") {
        std::ostringstream buffer;
        buffer << std::cin.rdbuf();
        return buffer.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InputError("cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

bool json_by_default() {
    const char* format = std::getenv("CONVOTE_FORMAT");
    return format && std::string(format) == "json";
}

/// Left-aligned column printer.
void print_table(std::ostream& out, const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> widths;
    for (const auto& row : rows)
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c >= widths.size())
                widths.push_back(0);
            widths[c] = std::max(widths[c], row[c].size());
        }
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            out << row[c];
            if (c + 1 < row.size())
                out << std::string(widths[c] - row[c].size() + 2, ' ');
        }
        out << "\n";
    }
}

std::string ranking_line(const Ranking& ranking, const CandidateRoster& roster) {
    std::string text;
    for (std::size_t t = 0; t < ranking.tiers.size(); ++t) {
        if (t)
            text += " > ";
        for (std::size_t i = 0; i < ranking.tiers[t].size(); ++i) {
            if (i)
                text += " = ";
            text += roster.name(ranking.tiers[t][i]);
        }
    }
    return text;
}

std::string join_names(const std::vector<std::size_t>& indices, const CandidateRoster& roster) {
    std::string text;
    for (std::size_t i = 0; i < indices.size(); ++i) {
        if (i)
            text += ", ";
        text += roster.name(indices[i]);
    }
    return text;
}

void cmd_rank(const std::string& path, bool json, std::optional<std::uint64_t> normalizer) {
    const PreferenceProfile profile = parse_profile(read_input(path));
    const Scoreboard board = convergence_scores(profile, normalizer);
    if (json) {
        nlohmann::ordered_json j;
        j["schema_version"] = 1;
        nlohmann::ordered_json body = scoreboard_json(board);
        for (auto& [key, value] : body.items())
            j[key] = value;
        std::cout << j.dump(2) << "\n";
        return;
    }
    std::vector<std::vector<std::string>> rows{{"candidate", "score", "decimal"}};
    for (std::size_t i = 0; i < board.scores.size(); ++i)
        rows.push_back({board.roster.name(i), to_fraction_string(board.scores[i]),
                        to_decimal_string(board.scores[i])});
    print_table(std::cout, rows);
    std::cout << "\nranking: " << ranking_line(rank(board), board.roster) << "\n";
}

void cmd_compare(const std::string& path, bool json) {
    const PreferenceProfile profile = parse_profile(read_input(path));
    const RuleComparison comparison = compare_rules(profile);
    if (json) {
        nlohmann::ordered_json j;
        j["schema_version"] = 1;
        nlohmann::ordered_json rules = nlohmann::ordered_json::array();
        for (const auto& row : comparison.outcomes) {
            nlohmann::ordered_json entry;
            if (!row.error.empty()) {
                entry["rule"] = row.rule;
                entry["error"] = row.error;
            } else if (row.board) {
                entry = scoreboard_json(*row.board);
            } else {
                entry["rule"] = row.rule;
                entry["scores"] = nullptr;
                entry["ranking"] = nullptr;
                if (row.winners && !row.winners->empty()) {
                    nlohmann::ordered_json names = nlohmann::ordered_json::array();
                    for (std::size_t x : *row.winners)
                        names.push_back(comparison.roster.name(x));
                    entry["winner"] = std::move(names);
                } else {
                    entry["winner"] = nullptr;
                }
            }
            rules.push_back(std::move(entry));
        }
        j["rules"] = std::move(rules);
        std::cout << j.dump(2) << "\n";
        return;
    }
    std::vector<std::vector<std::string>> rows{{"rule", "winner", "scores"}};
    for (const auto& row : comparison.outcomes) {
        std::string winner = "(none)";
        std::string scores = "-";
        if (!row.error.empty()) {
            winner = "-";
            scores = "error: " + row.error;
        } else {
            if (row.winners && !row.winners->empty())
                winner = join_names(*row.winners, comparison.roster);
            if (row.board) {
                scores.clear();
                for (std::size_t i = 0; i < row.board->scores.size(); ++i) {
                    if (i)
                        scores += "  ";
                    scores += comparison.roster.name(i) + "=" + to_fraction_string(row.board->scores[i]);
                }
            }
        }
        rows.push_back({row.rule, winner, scores});
    }
    print_table(std::cout, rows);
}

void cmd_graph(const std::string& path, const std::string& stage, GraphFormat format) {
    const PreferenceProfile profile = parse_profile(read_input(path));
    if (stage == "chain") {
        const TransitionMatrix t = convergence_chain(profile);
        if (format == GraphFormat::json) {
            nlohmann::ordered_json j;
            j["schema_version"] = 1;
            j["candidates"] = t.roster().names();
            nlohmann::ordered_json p = nlohmann::ordered_json::array();
            for (std::size_t i = 0; i < t.size(); ++i) {
                nlohmann::ordered_json row = nlohmann::ordered_json::array();
                for (std::size_t c = 0; c < t.size(); ++c)
                    row.push_back(rational_json(t.at(i, c)));
                p.push_back(std::move(row));
            }
            j["p"] = std::move(p);
            std::cout << j.dump(2) << "\n";
            return;
        }
        std::cout << "digraph chain {\n";
        for (std::size_t i = 0; i < t.size(); ++i)
            std::cout << "  \"" << t.roster().name(i) << "\";\n";
        for (std::size_t i = 0; i < t.size(); ++i)
            for (std::size_t c = 0; c < t.size(); ++c)
                if (t.at(i, c) != 0)
                    std::cout << "  \"" << t.roster().name(i) << "\" -> \"" << t.roster().name(c)
                              << "\" [label=\"" << to_fraction_string(t.at(i, c)) << "\"];\n";
        std::cout << "}\n";
        return;
    }
    const PCGraph condorcet = condorcet_graph(pairwise_counts(profile));
    if (stage == "condorcet") {
        std::cout << export_graph(condorcet, format);
        return;
    }
    std::cout << export_graph(complement(condorcet, profile.total_voters()), format);
}

void cmd_seats(const std::string& path, std::uint64_t total, SeatMethod method, bool json) {
    const PreferenceProfile profile = parse_profile(read_input(path));
    const Scoreboard board = convergence_scores(profile);
    const SeatAllocation allocation = allocate_seats(board, total, method);
    if (json) {
        nlohmann::ordered_json j;
        j["schema_version"] = 1;
        j["method"] = to_string(method);
        j["total"] = allocation.total;
        nlohmann::ordered_json seats;
        for (std::size_t i = 0; i < allocation.seats.size(); ++i)
            seats[board.roster.name(i)] = allocation.seats[i];
        j["seats"] = std::move(seats);
        std::cout << j.dump(2) << "\n";
        return;
    }
    std::vector<std::vector<std::string>> rows{{"candidate", "score", "seats"}};
    for (std::size_t i = 0; i < allocation.seats.size(); ++i)
        rows.push_back({board.roster.name(i), to_fraction_string(board.scores[i]),
                        std::to_string(allocation.seats[i])});
    print_table(std::cout, rows);
    std::cout << "\ntotal: " << allocation.total << "  method: " << to_string(method) << "\n";
}

void cmd_simulate_negotiate(const std::string& path, double tol, std::size_t max_rounds, bool json) {
    const PreferenceProfile profile = parse_profile(read_input(path));
    const SupportTrajectory trajectory = negotiate(profile, max_rounds, tol);
    if (json) {
        std::cout << trajectory_json(trajectory).dump(2) << "\n";
        return;
    }
    std::cout << "rounds: " << trajectory.steps.size() - 1 << "\n";
    if (trajectory.converged_at)
        std::cout << "converged_at: " << *trajectory.converged_at << "\n";
    else
        std::cout << "converged_at: (not converged)\n";
    std::vector<std::vector<std::string>> rows{{"candidate", "support"}};
    const Distribution& final_support = trajectory.steps.back();
    for (std::size_t i = 0; i < final_support.size(); ++i)
        rows.push_back({final_support.roster().name(i), to_decimal_string(final_support.at(i))});
    print_table(std::cout, rows);
}

void cmd_simulate_walk(const std::string& path, std::uint64_t steps, std::uint64_t seed, bool json) {
    const PreferenceProfile profile = parse_profile(read_input(path));
    const WalkReport report = random_walk(profile, steps, seed);
    if (json) {
        std::cout << walk_json(report, profile.roster).dump(2) << "\n";
        return;
    }
    std::cout << "seed: " << report.seed << "\nsteps: " << report.steps << "\n";
    std::vector<std::vector<std::string>> rows{{"candidate", "visits", "frequency"}};
    char buf[64];
    for (std::size_t i = 0; i < profile.roster.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.12g", report.frequencies[i]);
        rows.push_back({profile.roster.name(i), std::to_string(report.visit_counts[i]), buf});
    }
    print_table(std::cout, rows);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"convergence voting: rank, compare, export, apportion, simulate"};
    app.require_subcommand(1);
    const bool env_json = json_by_default();

    std::string path;
    bool json = env_json;
    std::optional<std::uint64_t> normalizer;

    auto* rank_cmd = app.add_subcommand("rank", "convergence scores and ranking of a ballot file");
    rank_cmd->add_option("file", path, "ballot file, or - for stdin")->required();
    rank_cmd->add_flag("--json", json, "emit JSON instead of a table");
    std::uint64_t normalizer_value = 0;
    auto* normalizer_opt =
        rank_cmd->add_option("--normalizer", normalizer_value, "override the chain normalizer N");

    auto* compare_cmd = app.add_subcommand("compare", "run all rules side by side");
    compare_cmd->add_option("file", path, "ballot file, or - for stdin")->required();
    compare_cmd->add_flag("--json", json, "emit JSON instead of a table");

    std::string stage = "complemented";
    std::string graph_format = env_json ? "json" : "dot";
    auto* graph_cmd = app.add_subcommand("graph", "export the pairwise-comparison graph");
    graph_cmd->add_option("file", path, "ballot file, or - for stdin")->required();
    graph_cmd->add_option("--stage", stage, "condorcet | complemented | chain")
        ->check(CLI::IsMember({"condorcet", "complemented", "chain"}));
    graph_cmd->add_option("--format", graph_format, "dot | json")
        ->check(CLI::IsMember({"dot", "json"}));

    std::uint64_t total = 0;
    std::string method = "largest-remainder";
    auto* seats_cmd = app.add_subcommand("seats", "apportion seats by the convergence scores");
    seats_cmd->add_option("file", path, "ballot file, or - for stdin")->required();
    seats_cmd->add_option("--total", total, "number of seats to allocate")
        ->required()
        ->check(CLI::PositiveNumber);
    seats_cmd->add_option("--method", method, "largest-remainder | dhondt")
        ->check(CLI::IsMember({"largest-remainder", "dhondt"}));
    seats_cmd->add_flag("--json", json, "emit JSON instead of a table");

    std::string mode;
    double tol = 1e-12;
    std::size_t max_rounds = 1'000'000;
    std::uint64_t steps = 1'000'000;
    std::uint64_t seed = 1;
    auto* simulate_cmd = app.add_subcommand("simulate", "run the negotiation or the deliberation walk");
    simulate_cmd->add_option("file", path, "ballot file, or - for stdin")->required();
    simulate_cmd->add_option("mode", mode, "negotiate | walk")
        ->required()
        ->check(CLI::IsMember({"negotiate", "walk"}));
    simulate_cmd->add_option("--tol", tol, "negotiation stopping tolerance (L1)");
    simulate_cmd->add_option("--max-rounds", max_rounds, "negotiation round cap");
    simulate_cmd->add_option("--steps", steps, "walk length");
    simulate_cmd->add_option("--seed", seed, "walk seed");
    simulate_cmd->add_flag("--json", json, "emit JSON instead of a table");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (normalizer_opt->count())
            normalizer = normalizer_value;
        if (rank_cmd->parsed())
            cmd_rank(path, json, normalizer);
        else if (compare_cmd->parsed())
            cmd_compare(path, json);
        else if (graph_cmd->parsed())
            cmd_graph(path, stage, graph_format == "json" ? GraphFormat::json : GraphFormat::dot);
        else if (seats_cmd->parsed())
            cmd_seats(path, total,
                      method == "dhondt" ? SeatMethod::dhondt : SeatMethod::largest_remainder, json);
        else if (simulate_cmd->parsed() && mode == "negotiate")
            cmd_simulate_negotiate(path, tol, max_rounds, json);
        else if (simulate_cmd->parsed())
            cmd_simulate_walk(path, steps, seed, json);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
