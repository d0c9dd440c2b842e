#include "mathtools/cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include <CLI11.hpp>

#include "mathtools/convert.hpp"
#include "mathtools/gold.hpp"
#include "mathtools/operations.hpp"
#include "mathtools/parser.hpp"
#include "mathtools/query.hpp"
#include "mathtools/serializer.hpp"
#include "mathtools/similarity.hpp"

namespace mathtools::cli {

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Options {
    bool lenient = false;
    bool strict = false;
    bool pretty = false;
    bool canonical = false;
    bool include_structural = false;
    std::string scope = "presentation";
    std::string branch = "both";
    std::string features;
    std::string expr;
    std::string lib;
    bool list = false;
    std::string measure;
    std::string costs = "1,1,1";
    std::string labels = "name";
    std::string gold;
    std::string converters;
    std::string tool;
    std::vector<std::string> inputs;
    std::vector<std::string> left;
    std::vector<std::string> right;
};

std::string read_input(const std::string& path, std::istream& in) {
    if (path == "-") return std::string(std::istreambuf_iterator<char>(in), {});
    std::ifstream file(path, std::ios::binary);
    if (!file) throw UsageError("cannot read '" + path + "'");
    return std::string(std::istreambuf_iterator<char>(file), {});
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string part; std::getline(ss, part, ',');) {
        if (!part.empty()) parts.push_back(part);
    }
    return parts;
}

class Session {
public:
    Session(const Options& opts, std::istream& in, std::ostream& out, std::ostream& err)
        : opts_(opts), in_(in), out_(out), err_(err) {}

    ParseMode mode() const { return opts_.strict ? ParseMode::strict : ParseMode::lenient; }

    MathDoc load(const std::string& path) {
        ParseResult result = parse(read_input(path, in_), mode());
        for (const auto& repair : result.report.repairs) {
            err_ << path << ": repair " << to_string(repair.kind) << " at byte " << repair.location << '\n';
        }
        return std::move(result.doc);
    }

    similarity::Scope scope() const {
        auto s = similarity::parse_scope(opts_.scope);
        if (!s) throw UsageError("unknown scope '" + opts_.scope + "'");
        return *s;
    }

    void write_doc(const MathDoc& doc) {
        const MathDoc& shown = doc;
        std::string text = serialize(opts_.canonical ? convert::canonicalize(shown) : shown, {opts_.pretty});
        if (text.empty() || text.back() != '\n') text += '\n';
        out_ << text;
    }

    int cmd_parse() {
        write_doc(load(opts_.inputs.at(0)));
        return kSuccess;
    }

    int cmd_clean() {
        CleanFeatures features;
        for (const auto& name : split_list(opts_.features)) {
            auto f = parse_clean_feature(name);
            if (!f) throw UsageError("unknown clean feature '" + name + "'");
            features.insert(*f);
        }
        if (features.empty()) throw UsageError("--features needs at least one feature");
        write_doc(clean(load(opts_.inputs.at(0)), features));
        return kSuccess;
    }

    int cmd_split() {
        const MathDoc doc = load(opts_.inputs.at(0));
        if (opts_.branch == "presentation") write_doc(split_presentation(doc));
        else if (opts_.branch == "content") write_doc(split_content(doc));
        else throw UsageError("--branch must be presentation or content");
        return kSuccess;
    }

    int cmd_extract() {
        const auto branch = parse_branch(opts_.branch);
        if (!branch) throw UsageError("unknown branch '" + opts_.branch + "'");
        for (const auto& id : extract_identifiers(load(opts_.inputs.at(0)), *branch)) {
            out_ << id.name << '\t' << id.text << '\n';
        }
        return kSuccess;
    }

    int cmd_select() {
        if (opts_.list) {
            out_ << query::PathLibrary::shipped().to_tsv();
            return kSuccess;
        }
        if (opts_.expr.empty() == opts_.lib.empty()) throw UsageError("select needs exactly one of --expr or --lib");
        if (opts_.inputs.empty()) throw UsageError("select needs an input");
        query::Query q;
        try {
            q = opts_.expr.empty() ? query::library_get(opts_.lib) : query::parse_query(opts_.expr);
        } catch (const query::SyntaxError& e) {
            throw UsageError(e.what());
        } catch (const query::UnknownName& e) {
            throw UsageError(e.what());
        }
        const MathDoc doc = load(opts_.inputs.at(0));
        for (NodeId id : query::select(doc, q)) {
            const MathNode& node = doc.node(id);
            out_ << id.index << '\t' << node.name << '\t' << node.text.value_or("") << '\n';
        }
        return kSuccess;
    }

    int cmd_histogram() {
        out_ << similarity::to_text(similarity::histogram(load(opts_.inputs.at(0)), scope(), opts_.include_structural));
        return kSuccess;
    }

    int cmd_dist() {
        if (opts_.inputs.size() != 2) throw UsageError("dist needs exactly two inputs");
        const MathDoc a = load(opts_.inputs[0]);
        const MathDoc b = load(opts_.inputs[1]);
        const std::string& m = opts_.measure;
        double value = 0.0;
        if (m == "ted") {
            value = similarity::tree_edit_distance(ted_tree(a), ted_tree(b), costs(), label_mode());
        } else {
            const auto ha = similarity::histogram(a, scope(), opts_.include_structural);
            const auto hb = similarity::histogram(b, scope(), opts_.include_structural);
            if (m == "hist-abs") value = similarity::hist_distance_absolute(ha, hb);
            else if (m == "hist-rel") value = similarity::hist_distance_relative(ha, hb);
            else if (m == "emd") value = similarity::emd(ha, hb);
            else if (m == "cosine") value = similarity::cosine_similarity(ha, hb);
            else throw UsageError("unknown measure '" + m + "'");
        }
        out_ << format_number(value) << '\n';
        return kSuccess;
    }

    int cmd_doc_dist() {
        if (opts_.left.empty() || opts_.right.empty()) throw UsageError("doc-dist needs --left and --right files");
        similarity::DocumentMeasure measure;
        if (opts_.measure == "emd") measure = similarity::DocumentMeasure::emd;
        else if (opts_.measure == "cosine") measure = similarity::DocumentMeasure::cosine;
        else throw UsageError("doc-dist --measure must be emd or cosine");
        std::vector<MathDoc> left;
        std::vector<MathDoc> right;
        for (const auto& p : opts_.left) left.push_back(load(p));
        for (const auto& p : opts_.right) right.push_back(load(p));
        out_ << format_number(similarity::document_distance(left, right, measure, scope(), opts_.include_structural))
             << '\n';
        return kSuccess;
    }

    int cmd_convert() {
        if (opts_.converters.empty()) throw UsageError("convert needs --converters");
        const convert::Registry registry = [&] {
            try {
                return convert::load_registry(read_input(opts_.converters, in_));
            } catch (const convert::InvalidSpec& e) {
                throw UsageError(e.what());
            } catch (const convert::DuplicateName& e) {
                throw UsageError(e.what());
            }
        }();
        if (opts_.list) {
            for (const auto& name : registry.list()) out_ << name << '\n';
            return kSuccess;
        }
        if (opts_.tool.empty() || opts_.inputs.empty()) throw UsageError("convert needs --tool and an input");
        std::string tex = read_input(opts_.inputs.at(0), in_);
        while (!tex.empty() && (tex.back() == '\n' || tex.back() == '\r')) tex.pop_back();
        try {
            const auto result = convert::convert(registry, opts_.tool, tex);
            for (const auto& repair : result.report.repairs) {
                err_ << opts_.tool << ": repair " << to_string(repair.kind) << " at byte " << repair.location << '\n';
            }
            write_doc(result.mathml);
        } catch (const convert::UnknownConverter& e) {
            throw UsageError(e.what());
        }
        return kSuccess;
    }

    int cmd_gold_validate() {
        if (opts_.gold.empty()) throw UsageError("gold-validate needs --gold");
        const auto entries = gold::load_gold(read_input(opts_.gold, in_));
        std::size_t flagged = 0;
        for (const auto& entry : entries) {
            const auto findings = gold::validate_entry(entry);
            if (findings.empty()) out_ << entry.id << "\tok\n";
            else ++flagged;
            for (const auto& f : findings) {
                out_ << entry.id << '\t' << gold::to_string(f.kind) << '\t' << f.message << '\n';
            }
        }
        if (flagged == 0) return kSuccess;
        err_ << "mml: " << flagged << " of " << entries.size() << " gold entries have findings\n";
        return kDomainError;
    }

private:
    MathNode ted_tree(const MathDoc& doc) const {
        switch (scope()) {
            case similarity::Scope::presentation: return split_presentation(doc).root();
            case similarity::Scope::content: return split_content(doc).root();
            case similarity::Scope::whole: return doc.root();
        }
        return doc.root();
    }

    similarity::CostConfig costs() const {
        const auto parts = split_list(opts_.costs);
        if (parts.size() != 3) throw UsageError("--costs expects ins,del,ren");
        double w[3];
        for (int i = 0; i < 3; ++i) {
            const auto& p = parts[static_cast<std::size_t>(i)];
            const auto [ptr, ec] = std::from_chars(p.data(), p.data() + p.size(), w[i]);
            if (ec != std::errc{} || ptr != p.data() + p.size()) throw UsageError("bad cost '" + p + "'");
        }
        similarity::CostConfig c{w[0], w[1], w[2]};
        try {
            c.validate();
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
        return c;
    }

    similarity::LabelMode label_mode() const {
        if (opts_.labels == "name") return similarity::LabelMode::name;
        if (opts_.labels == "name-text") return similarity::LabelMode::name_and_leaf_text;
        throw UsageError("--labels must be name or name-text");
    }

    const Options& opts_;
    std::istream& in_;
    std::ostream& out_;
    std::ostream& err_;
};

void add_mode_flags(CLI::App* cmd, Options& o) {
    auto* lenient = cmd->add_flag("--lenient", o.lenient, "Repair namespaces, entities and prefixes (default)");
    auto* strict = cmd->add_flag("--strict", o.strict, "Reject input that needs repairs");
    lenient->excludes(strict);
}

void add_scope_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("--scope", o.scope, "presentation, content or whole")
        ->check(CLI::IsMember({"presentation", "content", "whole"}));
    cmd->add_flag("--include-structural", o.include_structural, "Count math/semantics/annotation wrappers");
}

}  // namespace

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    if (value == 0.0) value = 0.0;  // drop the sign of -0
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 10);
    std::string text(buf, ec == std::errc{} ? end : buf);
    if (text.find_first_of(".e") == std::string::npos) text += ".0";
    return text;
}

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Parse, clean, query and compare parallel-markup MathML", "mml"};
    app.require_subcommand(1);

    auto* parse_cmd = app.add_subcommand("parse", "Parse and re-serialize a formula");
    add_mode_flags(parse_cmd, o);
    parse_cmd->add_flag("--pretty", o.pretty, "Indent output");
    parse_cmd->add_flag("--canonical", o.canonical, "Apply the built-in canonical form");
    parse_cmd->add_option("input", o.inputs, "File or -")->required()->expected(1);

    auto* clean_cmd = app.add_subcommand("clean", "Remove cross references, branches or annotations");
    add_mode_flags(clean_cmd, o);
    clean_cmd->add_option("--features", o.features,
                          "Comma list of cross_references, content_branch, presentation_branch, annotations")
        ->required();
    clean_cmd->add_flag("--pretty", o.pretty, "Indent output");
    clean_cmd->add_option("input", o.inputs, "File or -")->required()->expected(1);

    auto* split_cmd = app.add_subcommand("split", "Extract the presentation or content branch");
    add_mode_flags(split_cmd, o);
    split_cmd->add_option("--branch", o.branch, "presentation or content")->required();
    split_cmd->add_flag("--pretty", o.pretty, "Indent output");
    split_cmd->add_option("input", o.inputs, "File or -")->required()->expected(1);

    auto* extract_cmd = app.add_subcommand("extract", "List identifiers (mi/ci)");
    add_mode_flags(extract_cmd, o);
    extract_cmd->add_option("--branch", o.branch, "presentation, content or both (default)");
    extract_cmd->add_option("input", o.inputs, "File or -")->required()->expected(1);

    auto* select_cmd = app.add_subcommand("select", "Evaluate a path expression");
    add_mode_flags(select_cmd, o);
    select_cmd->add_option("--expr", o.expr, "XPath subset expression");
    select_cmd->add_option("--lib", o.lib, "Name of a shipped library expression");
    select_cmd->add_flag("--list", o.list, "Print the shipped expression library");
    select_cmd->add_option("input", o.inputs, "File or -")->expected(0, 1);

    auto* hist_cmd = app.add_subcommand("histogram", "Element-name histogram");
    add_mode_flags(hist_cmd, o);
    add_scope_flags(hist_cmd, o);
    hist_cmd->add_option("input", o.inputs, "File or -")->required()->expected(1);

    auto* dist_cmd = app.add_subcommand("dist", "Distance between two formulae");
    add_mode_flags(dist_cmd, o);
    add_scope_flags(dist_cmd, o);
    dist_cmd->add_option("--measure", o.measure, "hist-abs, hist-rel, ted, emd or cosine")
        ->required()
        ->check(CLI::IsMember({"hist-abs", "hist-rel", "ted", "emd", "cosine"}));
    dist_cmd->add_option("--costs", o.costs, "TED weights ins,del,ren");
    dist_cmd->add_option("--labels", o.labels, "TED labels: name or name-text");
    dist_cmd->add_option("inputs", o.inputs, "Two files")->required()->expected(2);

    auto* doc_cmd = app.add_subcommand("doc-dist", "Distance between two documents (lists of formulae)");
    add_mode_flags(doc_cmd, o);
    add_scope_flags(doc_cmd, o);
    doc_cmd->add_option("--measure", o.measure, "emd or cosine")->required();
    doc_cmd->add_option("--left", o.left, "Formulae of the first document")->required();
    doc_cmd->add_option("--right", o.right, "Formulae of the second document")->required();

    auto* conv_cmd = app.add_subcommand("convert", "Run a registered LaTeX to MathML converter");
    conv_cmd->add_option("--converters", o.converters, "Converter spec file (JSON)")->required();
    conv_cmd->add_option("--tool", o.tool, "Converter name");
    conv_cmd->add_flag("--list", o.list, "List registered converters");
    conv_cmd->add_flag("--pretty", o.pretty, "Indent output");
    conv_cmd->add_flag("--canonical", o.canonical, "Apply the built-in canonical form");
    conv_cmd->add_option("input", o.inputs, "TeX file or -")->expected(0, 1);

    auto* gold_cmd = app.add_subcommand("gold-validate", "Validate a gold-standard file");
    gold_cmd->add_option("--gold", o.gold, "Gold file (JSON)")->required();

    std::vector<const char*> argv{"mml"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kUsageError;
    }

    Session session(o, in, out, err);
    try {
        if (parse_cmd->parsed()) return session.cmd_parse();
        if (clean_cmd->parsed()) return session.cmd_clean();
        if (split_cmd->parsed()) return session.cmd_split();
        if (extract_cmd->parsed()) return session.cmd_extract();
        if (select_cmd->parsed()) return session.cmd_select();
        if (hist_cmd->parsed()) return session.cmd_histogram();
        if (dist_cmd->parsed()) return session.cmd_dist();
        if (doc_cmd->parsed()) return session.cmd_doc_dist();
        if (conv_cmd->parsed()) return session.cmd_convert();
        if (gold_cmd->parsed()) return session.cmd_gold_validate();
    } catch (const UsageError& e) {
        err << "mml: " << e.what() << '\n';
        return kUsageError;
    } catch (const Error& e) {
        err << "mml: " << e.what() << '\n';
        return kDomainError;
    }
    return kUsageError;
}

}  // namespace mathtools::cli
