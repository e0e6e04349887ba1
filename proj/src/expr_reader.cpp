#include "ctmc/expr_reader.hpp"

#include <cctype>
#include <charconv>
#include <string>

namespace ctmc {

namespace {

class Reader {
public:
    explicit Reader(std::string_view text) : text_(text) {}

    RateExpr parse() {
        RateExpr e = parse_sum();
        skip_ws();
        if (pos_ != text_.size()) fail("trailing input");
        return e;
    }

private:
    RateExpr parse_sum() {
        std::vector<RateExpr> terms;
        terms.push_back(parse_term());
        while (peek() == '+') {
            ++pos_;
            terms.push_back(parse_term());
        }
        return RateExpr::sum(std::move(terms));
    }

    RateExpr parse_term() {
        RateExpr cur = parse_factor();
        while (true) {
            char c = peek();
            if (c == '*') {
                ++pos_;
                cur = RateExpr::product({std::move(cur), parse_factor()});
            } else if (c == '/') {
                ++pos_;
                cur = RateExpr::quotient(std::move(cur), parse_factor());
            } else {
                return cur;
            }
        }
    }

    RateExpr parse_factor() {
        RateExpr base = parse_primary();
        if (peek() == '^') {
            ++pos_;
            skip_ws();
            if (!consume('-') || !consume('1')) fail("only '^-1' exponents are supported");
            return RateExpr::reciprocal(std::move(base));
        }
        return base;
    }

    RateExpr parse_primary() {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            RateExpr inner = parse_sum();
            skip_ws();
            if (!consume(')')) fail("expected ')'");
            return inner;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = pos_ + 1;
            while (j < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[j])) || text_[j] == '_'))
                ++j;
            RateExpr e = RateExpr::symbol(std::string(text_.substr(pos_, j - pos_)));
            pos_ = j;
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            double value = 0.0;
            auto [end, ec] =
                std::from_chars(text_.data() + pos_, text_.data() + text_.size(), value);
            if (ec != std::errc()) fail("malformed number");
            pos_ = static_cast<std::size_t>(end - text_.data());
            return RateExpr::constant(value);
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    bool consume(char c) {
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void skip_ws() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
    }

    [[noreturn]] void fail(const std::string& why) {
        throw std::invalid_argument("expression read error at offset " + std::to_string(pos_) +
                                    ": " + why);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace

RateExpr read_expr(std::string_view text) { return Reader(text).parse(); }

}  // namespace ctmc
