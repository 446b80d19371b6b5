#include "bioflow/lp/text_format.hpp"

#include <cmath>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <fmt/format.h>

#include "bioflow/csv.hpp"

namespace bioflow::lp {

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& message)
    : ModelError(fmt::format("line {}, column {}: {}", line, column, message)), line_(line), column_(column) {}

namespace {

constexpr std::string_view kMagic = "BIOFLOW-LP";

std::string num(double v) {
    if (v == kInf) return "inf";
    if (v == -kInf) return "-inf";
    return fmt::format("{:.17g}", v);
}

std::string signed_num(double v) {
    if (std::isinf(v)) return num(v);
    return fmt::format("{:+.17g}", v);
}

bool valid_name(std::string_view name) {
    if (name.empty()) return false;
    for (char c : name) {
        if (c == ':' || c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '#') return false;
    }
    return true;
}

const char* sense_token(RowSense s) {
    switch (s) {
        case RowSense::LessEqual: return "<=";
        case RowSense::Equal: return "=";
        case RowSense::GreaterEqual: return ">=";
    }
    return "?";
}

}  // namespace

std::string write_model_text(const LpModel& model) {
    if (auto problems = check_model(model); !problems.empty()) throw ModelError(problems.front());
    std::unordered_set<std::string_view> names;
    for (const auto& v : model.variables) {
        if (!valid_name(v.name)) throw ModelError(fmt::format("variable name '{}' cannot be written", v.name));
        if (!names.insert(v.name).second) throw ModelError(fmt::format("duplicate variable name '{}'", v.name));
    }
    for (const auto& c : model.constraints) {
        if (!valid_name(c.name)) throw ModelError(fmt::format("constraint name '{}' cannot be written", c.name));
    }

    std::string out = fmt::format("{} 1 {}\n", kMagic,
                                  model.sense == ObjectiveSense::Minimize ? "minimize" : "maximize");
    if (!model.variables.empty()) {
        out += "VARS\n";
        for (const auto& v : model.variables) out += v.name + "\n";
        bool header = false;
        for (const auto& v : model.variables) {
            if (v.lower == 0.0 && !std::signbit(v.lower) && v.upper == kInf) continue;
            if (!header) {
                out += "BOUNDS\n";
                header = true;
            }
            out += fmt::format("{} {} {}\n", v.name, num(v.lower), num(v.upper));
        }
    }
    if (!model.constraints.empty()) {
        out += "CONSTRAINTS\n";
        for (const auto& c : model.constraints) {
            out += c.name + ":";
            for (const auto& t : c.terms) out += fmt::format(" {} {}", signed_num(t.coef), model.variables[t.var].name);
            out += fmt::format(" {} {}\n", sense_token(c.sense), num(c.rhs));
        }
    }
    bool header = false;
    for (std::size_t j = 0; j < model.objective.size(); ++j) {
        if (model.objective[j] == 0.0) continue;
        if (!header) {
            out += "OBJECTIVE\n";
            header = true;
        }
        out += fmt::format("{} {}\n", model.variables[j].name, signed_num(model.objective[j]));
    }
    return out;
}

namespace {

struct Token {
    std::string_view text;
    std::size_t column;  // 1-based
};

std::vector<Token> tokenize(std::string_view line) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        if (i >= line.size()) break;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
        out.push_back({line.substr(i, j - i), i + 1});
        i = j;
    }
    return out;
}

double parse_number(const Token& t, std::size_t line) {
    if (t.text == "inf" || t.text == "+inf") return kInf;
    if (t.text == "-inf") return -kInf;
    auto v = csv::parse_double(t.text);
    if (!v) throw ParseError(line, t.column, fmt::format("expected a number, got '{}'", t.text));
    return *v;
}

}  // namespace

LpModel parse_model_text(std::string_view text) {
    enum class Section { None, Vars, Bounds, Constraints, Objective };
    LpModel model;
    std::unordered_map<std::string, std::size_t> index;
    Section section = Section::None;
    bool have_header = false;

    auto lookup = [&](const Token& t, std::size_t line) {
        auto it = index.find(std::string(t.text));
        if (it == index.end()) throw ParseError(line, t.column, fmt::format("unknown variable '{}'", t.text));
        return it->second;
    };

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        auto tokens = tokenize(line);
        if (tokens.empty() || tokens.front().text.front() == '#') continue;

        if (!have_header) {
            if (tokens.size() != 3 || tokens[0].text != kMagic || tokens[1].text != "1")
                throw ParseError(line_no, 1, fmt::format("expected '{} 1 <sense>' header", kMagic));
            if (tokens[2].text == "minimize")
                model.sense = ObjectiveSense::Minimize;
            else if (tokens[2].text == "maximize")
                model.sense = ObjectiveSense::Maximize;
            else
                throw ParseError(line_no, tokens[2].column, fmt::format("unknown sense '{}'", tokens[2].text));
            have_header = true;
            continue;
        }

        if (tokens.size() == 1) {
            auto kw = tokens[0].text;
            if (kw == "VARS") { section = Section::Vars; continue; }
            if (kw == "BOUNDS") { section = Section::Bounds; continue; }
            if (kw == "CONSTRAINTS") { section = Section::Constraints; continue; }
            if (kw == "OBJECTIVE") { section = Section::Objective; continue; }
        }

        switch (section) {
            case Section::None:
                throw ParseError(line_no, tokens[0].column, fmt::format("unexpected '{}' outside a section", tokens[0].text));
            case Section::Vars: {
                if (tokens.size() != 1)
                    throw ParseError(line_no, tokens[1].column, "one variable name per line");
                std::string name(tokens[0].text);
                if (!valid_name(name)) throw ParseError(line_no, tokens[0].column, fmt::format("bad name '{}'", name));
                if (index.count(name))
                    throw ParseError(line_no, tokens[0].column, fmt::format("duplicate variable '{}'", name));
                index.emplace(name, model.add_variable(name));
                break;
            }
            case Section::Bounds: {
                if (tokens.size() != 3) throw ParseError(line_no, tokens[0].column, "expected '<var> <lower> <upper>'");
                auto j = lookup(tokens[0], line_no);
                model.variables[j].lower = parse_number(tokens[1], line_no);
                model.variables[j].upper = parse_number(tokens[2], line_no);
                break;
            }
            case Section::Constraints: {
                auto head = tokens[0].text;
                if (head.size() < 2 || head.back() != ':')
                    throw ParseError(line_no, tokens[0].column, "expected '<name>:' at start of constraint");
                Constraint c;
                c.name = std::string(head.substr(0, head.size() - 1));
                std::size_t k = 1;
                bool have_sense = false;
                while (k < tokens.size()) {
                    auto tk = tokens[k].text;
                    if (tk == "<=" || tk == "=" || tk == ">=") {
                        c.sense = tk == "<=" ? RowSense::LessEqual : tk == "=" ? RowSense::Equal
                                                                                : RowSense::GreaterEqual;
                        if (k + 2 != tokens.size())
                            throw ParseError(line_no, tokens[k].column, "expected exactly one rhs after the sense");
                        c.rhs = parse_number(tokens[k + 1], line_no);
                        have_sense = true;
                        break;
                    }
                    if (k + 1 >= tokens.size())
                        throw ParseError(line_no, tokens[k].column, "term is missing its variable");
                    double coef = parse_number(tokens[k], line_no);
                    c.terms.push_back({lookup(tokens[k + 1], line_no), coef});
                    k += 2;
                }
                if (!have_sense) throw ParseError(line_no, line.size() + 1, "constraint has no sense (<=, =, >=)");
                model.constraints.push_back(std::move(c));
                break;
            }
            case Section::Objective: {
                if (tokens.size() != 2) throw ParseError(line_no, tokens[0].column, "expected '<var> <cost>'");
                auto j = lookup(tokens[0], line_no);
                model.objective[j] = parse_number(tokens[1], line_no);
                break;
            }
        }
    }
    if (!have_header) throw ParseError(1, 1, fmt::format("missing '{}' header", kMagic));
    if (auto problems = check_model(model); !problems.empty()) throw ParseError(line_no, 1, problems.front());
    return model;
}

}  // namespace bioflow::lp
