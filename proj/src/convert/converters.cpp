#include <algorithm>
#include <mutex>

#include <json.hpp>

#include "mathtools/convert.hpp"
#include "mathtools/serializer.hpp"
#include "process.hpp"

namespace mathtools::convert {

void ConverterSpec::validate() const {
    if (name.empty()) throw InvalidSpec("converter name is empty");
    if (timeout.count() <= 0) throw InvalidSpec("converter '" + name + "': timeout must be positive");
    std::vector<std::string> words;
    try {
        words = detail::split_command(command);
    } catch (const std::invalid_argument& e) {
        throw InvalidSpec("converter '" + name + "': " + e.what());
    }
    if (words.empty()) throw InvalidSpec("converter '" + name + "': empty command");
    if (input_mode == InputMode::argument) {
        std::size_t placeholders = 0;
        for (std::size_t pos = command.find(kInputPlaceholder); pos != std::string::npos;
             pos = command.find(kInputPlaceholder, pos + 1)) {
            ++placeholders;
        }
        if (placeholders != 1) {
            throw InvalidSpec("converter '" + name + "': argument mode needs exactly one " +
                              std::string(kInputPlaceholder) + " placeholder");
        }
    }
}

Registry::Registry(const Registry& other) {
    std::shared_lock lock(other.mutex_);
    specs_ = other.specs_;
}

Registry& Registry::operator=(const Registry& other) {
    if (this == &other) return *this;
    std::vector<ConverterSpec> copy;
    {
        std::shared_lock lock(other.mutex_);
        copy = other.specs_;
    }
    std::unique_lock lock(mutex_);
    specs_ = std::move(copy);
    return *this;
}

void Registry::register_converter(ConverterSpec spec) {
    spec.validate();
    std::unique_lock lock(mutex_);
    for (const auto& existing : specs_) {
        if (existing.name == spec.name) throw DuplicateName(spec.name);
    }
    specs_.push_back(std::move(spec));
}

std::vector<std::string> Registry::list() const {
    std::shared_lock lock(mutex_);
    std::vector<std::string> names;
    for (const auto& spec : specs_) names.push_back(spec.name);
    return names;
}

ConverterSpec Registry::get(std::string_view name) const {
    std::shared_lock lock(mutex_);
    for (const auto& spec : specs_) {
        if (spec.name == name) return spec;
    }
    throw UnknownConverter(std::string(name));
}

Registry load_registry(std::string_view json_text) {
    using nlohmann::json;
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw InvalidSpec(std::string("converter file is not valid JSON: ") + e.what());
    }
    if (!doc.is_array()) throw InvalidSpec("converter file must be a JSON array");
    Registry registry;
    for (const auto& obj : doc) {
        if (!obj.is_object()) throw InvalidSpec("converter entry is not an object");
        ConverterSpec spec;
        if (!obj.contains("name") || !obj["name"].is_string()) throw InvalidSpec("converter entry needs a name");
        spec.name = obj["name"].get<std::string>();
        if (!obj.contains("command") || !obj["command"].is_string()) {
            throw InvalidSpec("converter '" + spec.name + "' needs a command string");
        }
        spec.command = obj["command"].get<std::string>();
        const std::string mode = obj.value("input_mode", std::string("stdin"));
        if (mode == "argument") spec.input_mode = InputMode::argument;
        else if (mode == "stdin") spec.input_mode = InputMode::standard_input;
        else throw InvalidSpec("converter '" + spec.name + "': unknown input_mode '" + mode + "'");
        if (obj.contains("timeout_ms")) {
            if (!obj["timeout_ms"].is_number_integer()) {
                throw InvalidSpec("converter '" + spec.name + "': timeout_ms must be an integer");
            }
            spec.timeout = std::chrono::milliseconds(obj["timeout_ms"].get<long long>());
        }
        registry.register_converter(std::move(spec));
    }
    return registry;
}

namespace {

std::string excerpt(std::string_view s) {
    constexpr std::size_t kMax = 200;
    while (!s.empty() && (s.back() == '\n' || s.back() == '\r' || s.back() == ' ')) s.remove_suffix(1);
    if (s.size() > kMax) return std::string(s.substr(0, kMax)) + "...";
    return std::string(s);
}

ConversionResult run_spec(const ConverterSpec& spec, std::string_view input) {
    std::vector<std::string> argv = detail::split_command(spec.command);
    std::string_view stdin_data = input;
    if (spec.input_mode == InputMode::argument) {
        for (auto& word : argv) {
            if (auto pos = word.find(kInputPlaceholder); pos != std::string::npos) {
                word.replace(pos, kInputPlaceholder.size(), input);
            }
        }
        stdin_data = {};
    }

    const auto start = std::chrono::steady_clock::now();
    auto outcome = detail::run_process(argv, stdin_data, spec.timeout);
    const auto elapsed = std::chrono::steady_clock::now() - start;

    using Status = detail::ProcessOutcome::Status;
    switch (outcome.status) {
        case Status::not_found:
            throw ToolUnavailable("cannot run '" + argv.front() + "' for converter '" + spec.name + "': " + outcome.err,
                                  "");
        case Status::timed_out:
            throw Timeout("converter '" + spec.name + "' timed out after " + std::to_string(spec.timeout.count()) +
                              " ms",
                          std::move(outcome.out));
        case Status::exited:
        case Status::signaled:
            if (outcome.exit_code != 0) throw ToolFailed(outcome.exit_code, excerpt(outcome.err), std::move(outcome.out));
            break;
    }

    try {
        ParseResult parsed = parse(outcome.out, ParseMode::lenient);
        return ConversionResult{std::move(parsed.doc), std::move(outcome.out), std::move(parsed.report), spec.name,
                                std::chrono::duration_cast<std::chrono::nanoseconds>(elapsed)};
    } catch (const Error& e) {
        throw OutputNotMathML("converter '" + spec.name + "' produced no usable MathML: " + e.what(),
                              std::move(outcome.out));
    }
}

void sort_attributes(MathNode& node) {
    std::stable_sort(node.attributes.begin(), node.attributes.end(),
                     [](const Attribute& a, const Attribute& b) { return a.key < b.key; });
    for (auto& child : node.children) sort_attributes(child);
}

}  // namespace

ConversionResult convert(const Registry& registry, std::string_view name, std::string_view tex) {
    return run_spec(registry.get(name), tex);
}

ConversionResult canonicalize_external(const Registry& registry, std::string_view name, const MathDoc& doc) {
    ConverterSpec spec = registry.get(name);
    return run_spec(spec, serialize(doc));
}

MathDoc canonicalize(const MathDoc& doc) {
    MathNode root = doc.root();
    if (const auto sem = doc.semantics()) {
        // semantics is always the first child of math when detected.
        MathNode& semantics = root.children.front();
        std::vector<std::size_t> order;
        std::size_t pres_pos = semantics.children.size();
        std::size_t content_pos = semantics.children.size();
        std::size_t pos = 0;
        for (std::size_t i = sem->index + 1; i < doc.subtree_end(*sem); i = doc.subtree_end(NodeId{i}), ++pos) {
            if (doc.presentation_root() && NodeId{i} == *doc.presentation_root()) pres_pos = pos;
            else if (doc.content_container() && NodeId{i} == *doc.content_container()) content_pos = pos;
            else order.push_back(pos);
        }
        if (content_pos < semantics.children.size()) order.insert(order.begin(), content_pos);
        if (pres_pos < semantics.children.size()) order.insert(order.begin(), pres_pos);
        std::vector<MathNode> reordered;
        reordered.reserve(order.size());
        for (std::size_t p : order) reordered.push_back(std::move(semantics.children[p]));
        semantics.children = std::move(reordered);
    }
    sort_attributes(root);
    return MathDoc::from_tree(std::move(root));
}

std::vector<ConverterSpec> stub_specs(const std::string& stub_executable) {
    const std::string exe = "\"" + stub_executable + "\"";
    return {
        {"identity", exe + " identity", InputMode::standard_input, std::chrono::milliseconds(30000)},
        {"echo-frac", exe + " echo-frac " + std::string(kInputPlaceholder), InputMode::argument,
         std::chrono::milliseconds(30000)},
        {"fail", exe + " fail", InputMode::standard_input, std::chrono::milliseconds(30000)},
        {"slow", exe + " slow", InputMode::standard_input, std::chrono::milliseconds(10)},
        {"garbage", exe + " garbage", InputMode::standard_input, std::chrono::milliseconds(30000)},
    };
}

}  // namespace mathtools::convert
