// parkview: render, compare, and validate ordered merge trees and their
// interleavings. Exit codes: 0 ok, 1 validation failure, 2 I/O failure.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <parkview/decomposition.hpp>
#include <parkview/field.hpp>
#include <parkview/interleaving.hpp>
#include <parkview/layout.hpp>
#include <parkview/pipeline.hpp>
#include <parkview/render.hpp>
#include <parkview/tree_io.hpp>

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::ios_base::failure("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::ios_base::failure("cannot open " + path + " for writing");
    out << data;
    if (!out) throw std::ios_base::failure("write failed for " + path);
}

void report_hedges(const parkview::Scene& scene) {
    auto colors_used = [](const parkview::TreeLayout& tl) {
        std::vector<int> seen;
        for (const parkview::Hedge& h : tl.hedges)
            if (std::find(seen.begin(), seen.end(), h.color) == seen.end()) seen.push_back(h.color);
        return seen.size();
    };
    std::cout << "delta: " << scene.delta << "\n";
    std::cout << scene.left.columns.size() << " leaves left, " << scene.right.columns.size()
              << " leaves right\n";
    std::cout << "hedges: " << scene.left.hedges.size() << " left, " << scene.right.hedges.size()
              << " right\n";
    std::cout << "colors used: " << colors_used(scene.left) << " left, " << colors_used(scene.right)
              << " right\n";
}

int cmd_render(const std::string& tree_a, const std::string& tree_b,
               const std::string& interleaving, const std::string& out_path, int grid_fraction,
               int colors) {
    using namespace parkview;
    OrderedMergeTree A = read_tree(read_file(tree_a));
    OrderedMergeTree B = read_tree(read_file(tree_b));
    Interleaving il = read_interleaving(read_file(interleaving), A, B);

    std::vector<Violation> viol = validate_shift_map(il.alpha);
    for (Violation& v : validate_shift_map(il.beta)) viol.push_back(std::move(v));
    if (viol.empty())
        for (Violation& v : validate_interleaving(il)) viol.push_back(std::move(v));
    if (!viol.empty()) throw ValidationError(std::move(viol));

    PathBranchDecomposition pbd = heavy_path_branch_decomposition(il);
    LayoutConfig lcfg;
    lcfg.grid_fraction = grid_fraction;
    lcfg.palette_size = colors;
    Scene scene = build_scene(il, pbd, lcfg);
    write_file(out_path, render_svg(scene));
    report_hedges(scene);
    return 0;
}

int cmd_compare(const std::string& field_a, const std::string& field_b, double persistence,
                int connectivity, const std::string& out_path, const std::string& stats_path,
                int grid_fraction, int colors) {
    using namespace parkview;
    ScalarField2D fa = read_field(read_file(field_a));
    ScalarField2D fb = read_field(read_file(field_b));
    LayoutConfig lcfg;
    lcfg.grid_fraction = grid_fraction;
    lcfg.palette_size = colors;
    auto result = std::make_unique<CompareResult>();
    run_compare(fa, fb, persistence, connectivity, lcfg, RenderConfig{}, *result);
    write_file(out_path, result->svg);
    if (!stats_path.empty()) write_file(stats_path, result->stats.dump(2) + "\n");
    report_hedges(result->scene);
    return 0;
}

// Trees validate standalone; an interleaving file is checked against the two
// most recent valid trees seen earlier in the argument list.
int cmd_validate(const std::vector<std::string>& files) {
    using namespace parkview;
    nlohmann::json report = nlohmann::json::array();
    std::vector<OrderedMergeTree> trees;
    bool failed = false;
    for (const std::string& path : files) {
        nlohmann::json entry;
        entry["file"] = path;
        try {
            std::string text = read_file(path);
            nlohmann::json j = nlohmann::json::parse(text);
            if (j.contains("nodes")) {
                trees.push_back(read_tree(text));
                entry["kind"] = "tree";
                entry["status"] = "ok";
            } else if (j.contains("alpha")) {
                if (trees.size() < 2)
                    throw ParseError("interleaving needs two preceding tree files");
                Interleaving il =
                    read_interleaving(text, trees[trees.size() - 2], trees[trees.size() - 1]);
                std::vector<Violation> viol = validate_shift_map(il.alpha);
                for (Violation& v : validate_shift_map(il.beta)) viol.push_back(std::move(v));
                if (viol.empty())
                    for (Violation& v : validate_interleaving(il)) viol.push_back(std::move(v));
                entry["kind"] = "interleaving";
                if (viol.empty()) {
                    entry["status"] = "ok";
                } else {
                    entry["status"] = "invalid";
                    nlohmann::json vj = nlohmann::json::array();
                    for (const Violation& v : viol) vj.push_back({{"rule", v.rule}, {"detail", v.detail}});
                    entry["violations"] = vj;
                    failed = true;
                }
            } else {
                throw ParseError("unrecognized file (neither tree nor interleaving)");
            }
        } catch (const ValidationError& e) {
            entry["status"] = "invalid";
            nlohmann::json vj = nlohmann::json::array();
            for (const auto& v : e.violations) vj.push_back({{"rule", v.rule}, {"detail", v.detail}});
            entry["violations"] = vj;
            failed = true;
        } catch (const std::exception& e) {
            entry["status"] = "error";
            entry["detail"] = e.what();
            failed = true;
        }
        report.push_back(entry);
    }
    std::cout << report.dump(2) << "\n";
    return failed ? kExitValidation : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ParkView: schematic comparison of ordered merge trees"};
    app.require_subcommand(1);

    std::string tree_a, tree_b, interleaving, out_path, stats_path, field_a, field_b;
    double persistence = 0.0;
    int grid_fraction = 1, colors = 3, connectivity = 4;
    std::vector<std::string> files;

    CLI::App* render = app.add_subcommand("render", "Render a given interleaving as SVG");
    render->add_option("--tree-a", tree_a)->required();
    render->add_option("--tree-b", tree_b)->required();
    render->add_option("--interleaving", interleaving)->required();
    render->add_option("-o,--output", out_path)->required();
    render->add_option("--grid-fraction", grid_fraction)->check(CLI::PositiveNumber);
    render->add_option("--colors", colors)->check(CLI::Range(3, 1000));

    CLI::App* compare = app.add_subcommand("compare", "Compare two scalar fields end to end");
    compare->add_option("--field-a", field_a)->required();
    compare->add_option("--field-b", field_b)->required();
    compare->add_option("--persistence", persistence);
    compare->add_option("--connectivity", connectivity)->check(CLI::IsMember({4, 8}));
    compare->add_option("-o,--output", out_path)->required();
    compare->add_option("--stats", stats_path);
    compare->add_option("--grid-fraction", grid_fraction)->check(CLI::PositiveNumber);
    compare->add_option("--colors", colors)->check(CLI::Range(3, 1000));

    CLI::App* validate = app.add_subcommand("validate", "Validate tree / interleaving files");
    validate->add_option("files", files)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (render->parsed())
            return cmd_render(tree_a, tree_b, interleaving, out_path, grid_fraction, colors);
        if (compare->parsed())
            return cmd_compare(field_a, field_b, persistence, connectivity, out_path, stats_path,
                               grid_fraction, colors);
        return cmd_validate(files);
    } catch (const parkview::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return kExitValidation;
    } catch (const parkview::SceneError& e) {
        std::cerr << e.what() << "\n";
        return kExitValidation;
    } catch (const parkview::ParseError& e) {
        std::cerr << e.what() << "\n";
        return kExitValidation;
    } catch (const std::ios_base::failure& e) {
        std::cerr << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kExitIo;
    }
}
