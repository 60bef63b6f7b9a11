#include "distgeo/toml.hpp"

#include <cctype>

#include "distgeo/errors.hpp"

namespace distgeo {

std::int64_t TomlValue::as_int(const std::string& what) const {
    if (!is_int()) throw InputError(what + " must be an integer (line " + std::to_string(line) + ")");
    return std::get<std::int64_t>(v);
}

double TomlValue::as_number(const std::string& what) const {
    if (is_int()) return static_cast<double>(std::get<std::int64_t>(v));
    if (is_float()) return std::get<double>(v);
    throw InputError(what + " must be a number (line " + std::to_string(line) + ")");
}

const std::string& TomlValue::as_string(const std::string& what) const {
    if (!is_string()) throw InputError(what + " must be a string (line " + std::to_string(line) + ")");
    return std::get<std::string>(v);
}

const TomlValue::Array& TomlValue::as_array(const std::string& what) const {
    if (!is_array()) throw InputError(what + " must be an array (line " + std::to_string(line) + ")");
    return std::get<Array>(v);
}

namespace {

class Cursor {
public:
    explicit Cursor(const std::string& text) : s_(text) {}

    bool done() const { return i_ >= s_.size(); }
    char peek() const { return s_[i_]; }
    char take() {
        char c = s_[i_++];
        if (c == '\n') ++line_;
        return c;
    }
    int line() const { return line_; }

    // skips spaces, tabs and comments; newlines only when `newlines`
    void skip_ws(bool newlines) {
        while (!done()) {
            char c = peek();
            if (c == '#') {
                while (!done() && peek() != '\n') take();
            } else if (c == ' ' || c == '\t' || c == '\r') {
                take();
            } else if (c == '\n' && newlines) {
                take();
            } else {
                return;
            }
        }
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw InputError("scenario syntax error: " + msg + " (line " + std::to_string(line_) + ")");
    }

private:
    const std::string& s_;
    std::size_t i_ = 0;
    int line_ = 1;
};

bool is_bare_key_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

std::string parse_key(Cursor& cur) {
    std::string key;
    while (!cur.done() && is_bare_key_char(cur.peek())) key += cur.take();
    if (key.empty()) cur.fail("expected a key");
    return key;
}

TomlValue parse_value(Cursor& cur);

TomlValue parse_array(Cursor& cur) {
    TomlValue out;
    out.line = cur.line();
    TomlValue::Array items;
    cur.take();  // '['
    for (;;) {
        cur.skip_ws(true);
        if (cur.done()) cur.fail("unterminated array");
        if (cur.peek() == ']') {
            cur.take();
            break;
        }
        items.push_back(parse_value(cur));
        cur.skip_ws(true);
        if (cur.done()) cur.fail("unterminated array");
        if (cur.peek() == ',') {
            cur.take();
        } else if (cur.peek() != ']') {
            cur.fail("expected ',' or ']' in array");
        }
    }
    out.v = std::move(items);
    return out;
}

TomlValue parse_scalar(Cursor& cur) {
    TomlValue out;
    out.line = cur.line();
    char c = cur.peek();
    if (c == '"') {
        cur.take();
        std::string s;
        while (!cur.done() && cur.peek() != '"') {
            char ch = cur.take();
            if (ch == '\\') {
                if (cur.done()) cur.fail("unterminated string escape");
                char esc = cur.take();
                switch (esc) {
                    case 'n': s += '\n'; break;
                    case 't': s += '\t'; break;
                    case '"': s += '"'; break;
                    case '\\': s += '\\'; break;
                    default: cur.fail("unsupported string escape");
                }
            } else if (ch == '\n') {
                cur.fail("unterminated string");
            } else {
                s += ch;
            }
        }
        if (cur.done()) cur.fail("unterminated string");
        cur.take();  // closing quote
        out.v = std::move(s);
        return out;
    }
    std::string tok;
    while (!cur.done()) {
        char ch = cur.peek();
        if (ch == ',' || ch == ']' || ch == '\n' || ch == '#' || ch == ' ' || ch == '\t' ||
            ch == '\r')
            break;
        tok += cur.take();
    }
    if (tok == "true") { out.v = true; return out; }
    if (tok == "false") { out.v = false; return out; }
    if (tok.empty()) cur.fail("expected a value");

    bool looks_float = false;
    for (char ch : tok)
        if (ch == '.' || ch == 'e' || ch == 'E') looks_float = true;
    try {
        std::size_t used = 0;
        if (looks_float) {
            out.v = std::stod(tok, &used);
        } else {
            out.v = static_cast<std::int64_t>(std::stoll(tok, &used));
        }
        if (used != tok.size()) cur.fail("malformed number '" + tok + "'");
    } catch (const std::exception&) {
        cur.fail("malformed value '" + tok + "'");
    }
    return out;
}

TomlValue parse_value(Cursor& cur) {
    if (cur.peek() == '[') return parse_array(cur);
    return parse_scalar(cur);
}

}  // namespace

TomlDocument toml_parse(const std::string& text) {
    TomlDocument doc;
    Cursor cur(text);
    TomlTable* current = &doc.root;

    for (;;) {
        cur.skip_ws(true);
        if (cur.done()) break;
        if (cur.peek() == '[') {
            cur.take();
            std::string name = parse_key(cur);
            cur.skip_ws(false);
            if (cur.done() || cur.peek() != ']') cur.fail("expected ']' after table name");
            cur.take();
            if (doc.sections.count(name)) cur.fail("duplicate table [" + name + "]");
            current = &doc.sections[name];
            doc.section_order.push_back(name);
            continue;
        }
        int line = cur.line();
        std::string key = parse_key(cur);
        cur.skip_ws(false);
        if (cur.done() || cur.peek() != '=') cur.fail("expected '=' after key '" + key + "'");
        cur.take();
        cur.skip_ws(false);
        if (cur.done()) cur.fail("missing value for key '" + key + "'");
        TomlValue value = parse_value(cur);
        value.line = line;
        if (!current->entries.emplace(key, std::move(value)).second)
            cur.fail("duplicate key '" + key + "'");
        cur.skip_ws(false);
        if (!cur.done() && cur.peek() != '\n') cur.fail("unexpected text after value");
    }
    return doc;
}

}  // namespace distgeo
