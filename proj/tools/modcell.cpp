#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "modcell/critical.hpp"
#include "modcell/homology.hpp"
#include "modcell/radial.hpp"
#include "modcell/sullivan.hpp"
#include "modcell/verify.hpp"

using namespace modcell;

namespace {

struct Options {
    std::string model = "unilevel";
    std::optional<int> g, h;
    int n = 1;
    int m = 1;
    std::string format = "json";
    std::string out;
    int workers = 1;
};

struct Family {
    int g, h, n, m;
};

Family resolve(const Options& o) {
    if (o.g && o.h) throw CLI::ValidationError("--g and --h are mutually exclusive");
    if (!o.g && !o.h) throw CLI::ValidationError("one of --g or --h is required");
    if (o.n < 1 || o.m < 1) throw CLI::ValidationError("--n and --m must be at least 1");
    if (o.h) return {genus_for(*o.h, o.n, o.m), *o.h, o.n, o.m};
    return {*o.g, slit_pairs_for(*o.g, o.n, o.m), o.n, o.m};
}

void enumerate_cmd(const Family& f, const Options& o, std::ostream& os) {
    if (o.model == "unilevel" || o.model == "radial") {
        const auto filter = o.model == "unilevel" ? TypeFilter::unilevel : TypeFilter::nondegenerate;
        for (const auto& t : enumerate_types(f.h, f.n, f.m, filter, o.workers)) {
            if (o.format == "table") {
                os << multi_degree(t).radial_dimension() << "\t" << to_text(t) << "\n";
            } else {
                auto j = to_json(t);
                j["degree"] = multi_degree(t).dimension();
                os << j.dump() << "\n";
            }
        }
    } else if (o.model == "sd") {
        for (const auto& d : enumerate_diagrams(f.g, f.n, f.m, o.workers)) {
            if (o.format == "table") {
                os << dimension(d) << "\t" << to_text(d) << "\n";
            } else {
                auto j = to_json(d);
                j["degree"] = dimension(d);
                os << j.dump() << "\n";
            }
        }
    } else {
        std::map<std::string, FatGraph> graphs;
        for (const auto& t : enumerate_types(f.h, f.n, f.m, TypeFilter::nondegenerate, o.workers)) {
            auto g = critical_graph(t);
            graphs.emplace(canonical_label(g), std::move(g));
        }
        for (const auto& [label, g] : graphs) {
            if (o.format == "dot") {
                os << to_dot(g);
            } else {
                os << to_json(g).dump() << "\n";
            }
        }
    }
}

void homology_cmd(const Family& f, const Options& o, std::ostream& os) {
    if (o.model != "unilevel" && o.model != "sd") throw CLI::ValidationError("homology needs --model unilevel or sd");
    const auto cells = o.model == "sd" ? sd_cells(f.g, f.n, f.m, o.workers) : unilevel_cells(f.h, f.n, f.m, o.workers);
    const auto c = build_complex(cells);
    const auto hs = homology(c);
    if (o.format == "table") {
        os << "degree\tcells\tbetti\ttorsion\tgroup\n";
        for (const auto& hg : hs) {
            os << hg.degree << "\t" << c.cells[hg.degree].size() << "\t" << hg.betti << "\t";
            for (std::size_t k = 0; k < hg.torsion.size(); ++k) os << (k ? "," : "") << hg.torsion[k];
            os << (hg.torsion.empty() ? "-" : "") << "\t" << group_text(hg) << "\n";
        }
        os << "euler\t" << euler_characteristic(c) << "\n";
        return;
    }
    for (const auto& hg : hs) {
        auto j = to_json(hg);
        j["cells"] = c.cells[hg.degree].size();
        os << j.dump() << "\n";
    }
    os << nlohmann::json{{"euler_characteristic", euler_characteristic(c)}}.dump() << "\n";
}

bool report(const std::vector<CheckResult>& rs, std::ostream& os) {
    bool ok = true;
    for (const auto& r : rs) {
        os << to_json(r).dump() << "\n";
        ok = ok && r.pass();
    }
    return ok;
}

void export_cmd(const Family& f, const Options& o, std::ostream& os) {
    if (o.model == "sd") {
        int k = 0;
        for (const auto& d : enumerate_diagrams(f.g, f.n, f.m, o.workers))
            os << to_dot(induced_fat_graph(d), "diagram" + std::to_string(k++));
        return;
    }
    const auto filter = o.model == "unilevel" ? TypeFilter::unilevel : TypeFilter::nondegenerate;
    int k = 0;
    for (const auto& t : enumerate_types(f.h, f.n, f.m, filter, o.workers)) {
        const auto g = o.model == "unilevel" ? unfolded_graph(t) : critical_graph(t);
        os << "// " << to_text(t) << "\n" << to_dot(g, "type" + std::to_string(k++));
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cell models of the moduli of cobordisms: radial slits and Sullivan diagrams"};
    app.require_subcommand(1);
    app.set_help_flag("--help", "print this help and exit");
    Options o;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--model", o.model, "cell model")
            ->check(CLI::IsMember({"radial", "unilevel", "sd", "fatgraph"}));
        sub->add_option("--g", o.g, "genus");
        sub->add_option("--h", o.h, "number of slit pairs");
        sub->add_option("--n", o.n, "incoming boundary components");
        sub->add_option("--m", o.m, "outgoing boundary components");
        sub->add_option("--format", o.format, "output format")->check(CLI::IsMember({"json", "dot", "table"}));
        sub->add_option("--out", o.out, "output file (default stdout)");
        sub->add_option("--workers", o.workers, "worker threads")->check(CLI::PositiveNumber);
    };
    auto* enumerate = app.add_subcommand("enumerate", "list the canonical cells");
    auto* hom = app.add_subcommand("homology", "Betti numbers and torsion per degree");
    auto* bij = app.add_subcommand("verify-bijection", "check f and g against each other and the face maps");
    auto* zig = app.add_subcommand("verify-zigzag", "check critical graphs and chamber collapses");
    auto* exp = app.add_subcommand("export", "render graphs as DOT");
    for (auto* s : {enumerate, hom, bij, zig, exp}) add_common(s);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    std::ofstream file;
    if (!o.out.empty()) {
        file.open(o.out);
        if (!file) {
            std::cerr << "cannot open " << o.out << "\n";
            return 2;
        }
    }
    std::ostream& os = o.out.empty() ? std::cout : file;

    try {
        const auto f = resolve(o);
        if (enumerate->parsed()) {
            enumerate_cmd(f, o, os);
        } else if (hom->parsed()) {
            homology_cmd(f, o, os);
        } else if (bij->parsed()) {
            return report(verify_bijection(f.h, f.n, f.m, o.workers), os) ? 0 : 1;
        } else if (zig->parsed()) {
            auto rs = verify_critical(f.h, f.n, f.m, o.workers);
            for (auto& r : verify_zigzag(f.h, f.n, f.m, o.workers)) rs.push_back(std::move(r));
            return report(rs, os) ? 0 : 1;
        } else {
            export_cmd(f, o, os);
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }
    return 0;
}
