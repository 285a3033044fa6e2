#pragma once

#include <algorithm>
#include <cctype>
#include <string>
#include <utility>
#include <vector>

#include "tracelab/errors.hpp"

namespace tracelab::detail {

struct Token {
    enum class Kind { Ident, Integer, Symbol, End };
    Kind kind = Kind::End;
    std::string text;
    int line = 0;
    int column = 0;

    bool is(Kind k, const std::string& t) const { return kind == k && text == t; }
    bool is_symbol(const std::string& t) const { return is(Kind::Symbol, t); }
    bool is_ident(const std::string& t) const { return is(Kind::Ident, t); }
};

// Byte-oriented tokenizer shared by the three language parsers. Symbols
// are matched longest-first, so multi-byte operators like ":=" or "→"
// just go in the symbol table as strings.
class Lexer {
  public:
    Lexer(std::string source, std::vector<std::string> symbols,
          bool hash_comments = false, int first_line = 1)
        : src_(std::move(source)),
          symbols_(std::move(symbols)),
          hash_comments_(hash_comments),
          line_(first_line) {
        std::sort(symbols_.begin(), symbols_.end(),
                  [](const std::string& a, const std::string& b) {
                      return a.size() > b.size();
                  });
        advance();
    }

    const Token& peek() const { return current_; }

    Token next() {
        Token t = current_;
        advance();
        return t;
    }

    bool at_end() const { return current_.kind == Token::Kind::End; }

    Token expect_symbol(const std::string& s) {
        if (!current_.is_symbol(s)) fail("expected '" + s + "'");
        return next();
    }

    Token expect_ident() {
        if (current_.kind != Token::Kind::Ident) fail("expected an identifier");
        return next();
    }

    Token expect_keyword(const std::string& kw) {
        if (!current_.is_ident(kw)) fail("expected '" + kw + "'");
        return next();
    }

    [[noreturn]] void fail(const std::string& msg) const {
        std::string got;
        switch (current_.kind) {
            case Token::Kind::End: got = "end of input"; break;
            default: got = "'" + current_.text + "'"; break;
        }
        throw ParseError(msg + ", got " + got, current_.line, current_.column);
    }

  private:
    void advance() {
        skip_blank();
        current_.line = line_;
        current_.column = column();
        if (pos_ >= src_.size()) {
            current_.kind = Token::Kind::End;
            current_.text.clear();
            return;
        }
        char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t start = pos_;
            while (pos_ < src_.size() &&
                   std::isdigit(static_cast<unsigned char>(src_[pos_])))
                ++pos_;
            current_.kind = Token::Kind::Integer;
            current_.text = src_.substr(start, pos_ - start);
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                    src_[pos_] == '_'))
                ++pos_;
            current_.kind = Token::Kind::Ident;
            current_.text = src_.substr(start, pos_ - start);
            return;
        }
        for (const std::string& sym : symbols_) {
            if (src_.compare(pos_, sym.size(), sym) == 0) {
                pos_ += sym.size();
                current_.kind = Token::Kind::Symbol;
                current_.text = sym;
                return;
            }
        }
        throw ParseError("unexpected character '" + std::string(1, c) + "'", line_,
                         column());
    }

    void skip_blank() {
        for (;;) {
            while (pos_ < src_.size() &&
                   std::isspace(static_cast<unsigned char>(src_[pos_]))) {
                if (src_[pos_] == '\n') {
                    ++line_;
                    line_start_ = pos_ + 1;
                }
                ++pos_;
            }
            if (hash_comments_ && pos_ < src_.size() && src_[pos_] == '#') {
                while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
                continue;
            }
            return;
        }
    }

    int column() const { return static_cast<int>(pos_ - line_start_) + 1; }

    std::string src_;
    std::vector<std::string> symbols_;
    bool hash_comments_;
    size_t pos_ = 0;
    size_t line_start_ = 0;
    int line_;
    Token current_;
};

}  // namespace tracelab::detail
