#include "ctmc/parser.hpp"

#include <cctype>
#include <charconv>
#include <map>
#include <optional>
#include <vector>

#include "ctmc/format.hpp"

namespace ctmc {

const char* parse_error_kind_name(ParseErrorKind k) {
    switch (k) {
        case ParseErrorKind::Syntax: return "Syntax";
        case ParseErrorKind::DuplicateState: return "DuplicateState";
        case ParseErrorKind::DuplicateTransition: return "DuplicateTransition";
        case ParseErrorKind::UnknownState: return "UnknownState";
        case ParseErrorKind::UnknownRate: return "UnknownRate";
        case ParseErrorKind::NonPositiveRate: return "NonPositiveRate";
        case ParseErrorKind::SelfLoop: return "SelfLoop";
        case ParseErrorKind::NoRoot: return "NoRoot";
        case ParseErrorKind::NotStronglyConnected: return "NotStronglyConnected";
        case ParseErrorKind::AbsorbingState: return "AbsorbingState";
    }
    return "Syntax";
}

std::string ParseError::to_string() const {
    return std::to_string(line) + ":" + std::to_string(column) + " " + message;
}

namespace {

struct SourceLoc {
    std::size_t line = 1;
    std::size_t column = 1;
};

struct Token {
    enum class Type { Ident, Number, Arrow, Colon, Equals };
    Type type = Type::Ident;
    std::string text;
    std::size_t column = 1;
    double number = 0.0;
};

[[nodiscard]] ParseError err(SourceLoc loc, ParseErrorKind kind, std::string message) {
    return ParseError{loc.line, loc.column, kind, std::move(message)};
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool number_start(char c) { return std::isdigit(static_cast<unsigned char>(c)) || c == '.'; }

// Lexes one line; on failure fills `error` and returns false.
bool lex_line(std::string_view text, std::size_t lineno, std::vector<Token>& out,
              std::optional<ParseError>& error) {
    std::size_t i = 0;
    while (i < text.size()) {
        char c = text[i];
        if (c == ' ' || c == '\t') {
            ++i;
            continue;
        }
        if (c == '#') break;
        std::size_t col = i + 1;
        if (ident_start(c)) {
            std::size_t j = i + 1;
            while (j < text.size() && ident_char(text[j])) ++j;
            out.push_back({Token::Type::Ident, std::string(text.substr(i, j - i)), col, 0.0});
            i = j;
        } else if (number_start(c) || (c == '-' && i + 1 < text.size() && text[i + 1] != '>')) {
            double value = 0.0;
            auto [end, ec] = std::from_chars(text.data() + i, text.data() + text.size(), value);
            if (ec != std::errc() || end == text.data() + i) {
                error = err({lineno, col}, ParseErrorKind::Syntax, "malformed number");
                return false;
            }
            std::size_t len = static_cast<std::size_t>(end - (text.data() + i));
            out.push_back({Token::Type::Number, std::string(text.substr(i, len)), col, value});
            i += len;
        } else if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') {
            out.push_back({Token::Type::Arrow, "->", col, 0.0});
            i += 2;
        } else if (c == ':') {
            out.push_back({Token::Type::Colon, ":", col, 0.0});
            ++i;
        } else if (c == '=') {
            out.push_back({Token::Type::Equals, "=", col, 0.0});
            ++i;
        } else {
            error = err({lineno, col}, ParseErrorKind::Syntax,
                        std::string("unexpected character '") + c + "'");
            return false;
        }
    }
    return true;
}

struct StateDecl {
    std::string name;
    bool up = false;
    SourceLoc loc;
};

struct TransDecl {
    std::string src, dst, symbol;
    double value = 0.0;
    SourceLoc src_loc;
};

class LineParser {
public:
    explicit LineParser(std::string_view text) : text_(text) {}

    ParseResult run();

private:
    // statement handlers; each returns nullopt on success
    using Status = std::optional<ParseError>;
    Status handle(const std::vector<Token>& toks, std::size_t lineno);
    Status stmt_model(const std::vector<Token>& t, SourceLoc at);
    Status stmt_root(const std::vector<Token>& t, SourceLoc at);
    Status stmt_state(const std::vector<Token>& t, SourceLoc at);
    Status stmt_rate(const std::vector<Token>& t, SourceLoc at);
    Status stmt_trans(const std::vector<Token>& t, SourceLoc at);

    Status finish(ParseResult& out);

    const Token* get(const std::vector<Token>& t, std::size_t i) const {
        return i < t.size() ? &t[i] : nullptr;
    }
    SourceLoc end_of(const std::vector<Token>& t, SourceLoc at) const {
        if (t.empty()) return at;
        const Token& last = t.back();
        return {at.line, last.column + last.text.size()};
    }

    std::string_view text_;

    bool have_model_ = false;
    std::string model_name_;
    SourceLoc model_loc_;

    std::optional<std::pair<std::string, SourceLoc>> root_;

    std::vector<StateDecl> states_;
    std::map<std::string, std::size_t, std::less<>> state_index_;

    std::map<std::string, std::pair<double, SourceLoc>, std::less<>> rates_;

    std::vector<TransDecl> transitions_;
    std::map<std::pair<std::string, std::string>, SourceLoc> edges_;
};

LineParser::Status LineParser::stmt_model(const std::vector<Token>& t, SourceLoc at) {
    if (have_model_)
        return err(at, ParseErrorKind::Syntax, "duplicate 'model' statement");
    const Token* name = get(t, 1);
    if (!name || name->type != Token::Type::Ident)
        return err(name ? SourceLoc{at.line, name->column} : end_of(t, at),
                   ParseErrorKind::Syntax, "expected model name");
    have_model_ = true;
    model_name_ = name->text;
    model_loc_ = at;
    return std::nullopt;
}

LineParser::Status LineParser::stmt_root(const std::vector<Token>& t, SourceLoc at) {
    if (root_)
        return err(at, ParseErrorKind::Syntax, "duplicate 'root' statement");
    const Token* name = get(t, 1);
    if (!name || name->type != Token::Type::Ident)
        return err(name ? SourceLoc{at.line, name->column} : end_of(t, at),
                   ParseErrorKind::Syntax, "expected state name");
    root_ = {name->text, {at.line, name->column}};
    return std::nullopt;
}

LineParser::Status LineParser::stmt_state(const std::vector<Token>& t, SourceLoc at) {
    const Token* name = get(t, 1);
    if (!name || name->type != Token::Type::Ident)
        return err(name ? SourceLoc{at.line, name->column} : end_of(t, at),
                   ParseErrorKind::Syntax, "expected state name");
    const Token* flag = get(t, 2);
    if (!flag || flag->type != Token::Type::Ident ||
        (flag->text != "up" && flag->text != "down"))
        return err(flag ? SourceLoc{at.line, flag->column} : end_of(t, at),
                   ParseErrorKind::Syntax, "expected 'up' or 'down'");
    SourceLoc loc{at.line, name->column};
    if (state_index_.count(name->text))
        return err(loc, ParseErrorKind::DuplicateState, "duplicate state '" + name->text + "'");
    state_index_.emplace(name->text, states_.size());
    states_.push_back({name->text, flag->text == "up", loc});
    return std::nullopt;
}

LineParser::Status LineParser::stmt_rate(const std::vector<Token>& t, SourceLoc at) {
    const Token* name = get(t, 1);
    if (!name || name->type != Token::Type::Ident)
        return err(name ? SourceLoc{at.line, name->column} : end_of(t, at),
                   ParseErrorKind::Syntax, "expected rate name");
    const Token* eq = get(t, 2);
    if (!eq || eq->type != Token::Type::Equals)
        return err(eq ? SourceLoc{at.line, eq->column} : end_of(t, at), ParseErrorKind::Syntax,
                   "expected '='");
    const Token* value = get(t, 3);
    if (!value || value->type != Token::Type::Number)
        return err(value ? SourceLoc{at.line, value->column} : end_of(t, at),
                   ParseErrorKind::Syntax, "expected rate value");
    if (!(value->number > 0.0))
        return err({at.line, value->column}, ParseErrorKind::NonPositiveRate,
                   "rate must be positive (got " + value->text + ")");
    if (rates_.count(name->text))
        return err({at.line, name->column}, ParseErrorKind::Syntax,
                   "duplicate rate '" + name->text + "'");
    rates_.emplace(name->text, std::make_pair(value->number, SourceLoc{at.line, name->column}));
    return std::nullopt;
}

LineParser::Status LineParser::stmt_trans(const std::vector<Token>& t, SourceLoc at) {
    const Token* src = get(t, 1);
    if (!src || src->type != Token::Type::Ident)
        return err(src ? SourceLoc{at.line, src->column} : end_of(t, at),
                   ParseErrorKind::Syntax, "expected state name");
    const Token* arrow = get(t, 2);
    if (!arrow || arrow->type != Token::Type::Arrow)
        return err(arrow ? SourceLoc{at.line, arrow->column} : end_of(t, at),
                   ParseErrorKind::Syntax, "expected '->'");
    const Token* dst = get(t, 3);
    if (!dst || dst->type != Token::Type::Ident)
        return err(dst ? SourceLoc{at.line, dst->column} : end_of(t, at),
                   ParseErrorKind::Syntax, "expected state name");
    const Token* colon = get(t, 4);
    if (!colon || colon->type != Token::Type::Colon)
        return err(colon ? SourceLoc{at.line, colon->column} : end_of(t, at),
                   ParseErrorKind::Syntax, "expected ':'");
    const Token* rate = get(t, 5);
    if (!rate || (rate->type != Token::Type::Ident && rate->type != Token::Type::Number))
        return err(rate ? SourceLoc{at.line, rate->column} : end_of(t, at),
                   ParseErrorKind::Syntax, "expected rate symbol or value");

    if (!state_index_.count(src->text))
        return err({at.line, src->column}, ParseErrorKind::UnknownState,
                   "unknown state '" + src->text + "'");
    if (!state_index_.count(dst->text))
        return err({at.line, dst->column}, ParseErrorKind::UnknownState,
                   "unknown state '" + dst->text + "'");
    if (src->text == dst->text)
        return err({at.line, dst->column}, ParseErrorKind::SelfLoop,
                   "self-loop " + src->text + " -> " + dst->text);
    auto key = std::make_pair(src->text, dst->text);
    if (edges_.count(key))
        return err({at.line, src->column}, ParseErrorKind::DuplicateTransition,
                   "duplicate transition " + src->text + " -> " + dst->text);

    std::string symbol;
    double value = 0.0;
    if (rate->type == Token::Type::Ident) {
        auto it = rates_.find(rate->text);
        if (it == rates_.end())
            return err({at.line, rate->column}, ParseErrorKind::UnknownRate,
                       "unknown rate '" + rate->text + "'");
        symbol = rate->text;
        value = it->second.first;
    } else {
        if (!(rate->number > 0.0))
            return err({at.line, rate->column}, ParseErrorKind::NonPositiveRate,
                       "rate must be positive (got " + rate->text + ")");
        symbol = "r" + src->text + "_" + dst->text;
        if (rates_.count(symbol))
            return err({at.line, rate->column}, ParseErrorKind::Syntax,
                       "auto-generated rate name '" + symbol + "' collides with a declared rate");
        value = rate->number;
        rates_.emplace(symbol, std::make_pair(value, SourceLoc{at.line, rate->column}));
    }

    edges_.emplace(key, SourceLoc{at.line, src->column});
    transitions_.push_back({src->text, dst->text, symbol, value, {at.line, src->column}});
    return std::nullopt;
}

LineParser::Status LineParser::handle(const std::vector<Token>& toks, std::size_t lineno) {
    const Token& head = toks.front();
    SourceLoc at{lineno, head.column};
    if (head.type != Token::Type::Ident)
        return err(at, ParseErrorKind::Syntax, "expected statement keyword");

    if (!have_model_ && head.text != "model")
        return err(at, ParseErrorKind::Syntax, "expected 'model' statement");

    Status status;
    std::size_t arity = 0;
    if (head.text == "model") {
        status = stmt_model(toks, at);
        arity = 2;
    } else if (head.text == "root") {
        status = stmt_root(toks, at);
        arity = 2;
    } else if (head.text == "state") {
        status = stmt_state(toks, at);
        arity = 3;
    } else if (head.text == "rate") {
        status = stmt_rate(toks, at);
        arity = 4;
    } else if (head.text == "trans") {
        status = stmt_trans(toks, at);
        arity = 6;
    } else {
        return err(at, ParseErrorKind::Syntax, "unknown statement '" + head.text + "'");
    }
    if (status) return status;
    if (toks.size() > arity)
        return err({lineno, toks[arity].column}, ParseErrorKind::Syntax,
                   "unexpected token '" + toks[arity].text + "'");
    return std::nullopt;
}

LineParser::Status LineParser::finish(ParseResult& out) {
    if (!have_model_)
        return err({1, 1}, ParseErrorKind::Syntax, "expected 'model' statement");
    if (states_.empty())
        return err(model_loc_, ParseErrorKind::NoRoot, "model declares no states");

    std::size_t root_id = 0;
    if (root_) {
        auto it = state_index_.find(root_->first);
        if (it == state_index_.end())
            return err(root_->second, ParseErrorKind::NoRoot,
                       "root state '" + root_->first + "' not declared");
        root_id = it->second;
    }

    // Structural checks passed line by line; graph-level validation runs in
    // the builder, and its faults map back to declaration sites here.
    try {
        ModelBuilder builder(model_name_);
        for (const auto& s : states_) builder.add_state(s.name, s.up);
        builder.set_root(states_[root_id].name);
        for (const auto& t : transitions_)
            builder.add_transition(t.src, t.dst, t.symbol, t.value);
        out = builder.build();
    } catch (const ModelError& e) {
        SourceLoc loc = model_loc_;
        if (auto it = state_index_.find(e.subject()); it != state_index_.end())
            loc = states_[it->second].loc;
        ParseErrorKind kind = ParseErrorKind::Syntax;
        switch (e.fault()) {
            case ModelFault::AbsorbingState: kind = ParseErrorKind::AbsorbingState; break;
            case ModelFault::NotStronglyConnected:
                kind = ParseErrorKind::NotStronglyConnected;
                break;
            case ModelFault::NoRoot: kind = ParseErrorKind::NoRoot; break;
            default: break;
        }
        return ParseError{loc.line, loc.column, kind, e.what()};
    }
    return std::nullopt;
}

ParseResult LineParser::run() {
    std::string_view rest = text_;
    if (rest.substr(0, 3) == "\xEF\xBB\xBF") rest.remove_prefix(3);  // UTF-8 BOM

    std::size_t lineno = 0;
    while (!rest.empty()) {
        ++lineno;
        std::size_t nl = rest.find('\n');
        std::string_view line = nl == std::string_view::npos ? rest : rest.substr(0, nl);
        rest = nl == std::string_view::npos ? std::string_view{} : rest.substr(nl + 1);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

        std::vector<Token> toks;
        std::optional<ParseError> lex_error;
        if (!lex_line(line, lineno, toks, lex_error)) return *lex_error;
        if (toks.empty()) continue;

        if (auto status = handle(toks, lineno)) return *status;
    }

    ParseResult out = ParseError{};
    if (auto status = finish(out)) return *status;
    return out;
}

}  // namespace

ParseResult parse_model(std::string_view text) { return LineParser(text).run(); }

std::string serialize_model(const Model& model) {
    std::string out;
    out += "model " + model.name() + "\n";
    out += "root " + model.state_name(model.root()) + "\n";
    for (StateId s = 0; s < model.state_count(); ++s)
        out += "state " + model.state_name(s) + (model.is_up(s) ? " up\n" : " down\n");
    for (const auto& [symbol, value] : model.rate_table())
        out += "rate " + symbol + " = " + format_shortest(value) + "\n";
    for (const auto& t : model.transitions())
        out += "trans " + model.state_name(t.src) + " -> " + model.state_name(t.dst) + " : " +
               t.rate.symbol + "\n";
    return out;
}

std::string emit_json(const SteadyState& ss, const Model& model) {
    if (ss.pi.size() != model.state_count())
        throw std::invalid_argument("steady state and model disagree on the state count");
    std::string out = "{\"model\":\"" + json_escape(model.name()) + "\",\"pi\":{";
    for (StateId s = 0; s < model.state_count(); ++s) {
        if (s) out += ",";
        out += "\"" + json_escape(model.state_name(s)) + "\":" + format_sig17(ss.pi[s]);
    }
    out += "},\"availability\":" + format_sig17(ss.availability);
    out += ",\"residual\":" + format_sig17(ss.residual) + "}";
    return out;
}

}  // namespace ctmc
