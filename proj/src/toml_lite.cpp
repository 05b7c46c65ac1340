#include "uavnet/toml_lite.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <sstream>

namespace uavnet::toml {

using nlohmann::json;

ParseError::ParseError(std::string source, std::size_t line, const std::string& what)
    : std::runtime_error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

namespace {

bool is_bare_key_char(char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' || c == '-';
}

class Parser {
  public:
    Parser(std::string text, std::string source) : text_(std::move(text)), source_(std::move(source)) {}

    json run() {
        json root = json::object();
        json* table = &root;
        while (true) {
            skip_blank_lines();
            if (eof()) {
                break;
            }
            if (peek() == '[') {
                table = header(root);
            } else {
                keyval(*table);
            }
            end_of_line();
        }
        return root;
    }

  private:
    [[noreturn]] void fail(const std::string& what) const { throw ParseError(source_, line_, what); }

    bool eof() const { return pos_ >= text_.size(); }
    char peek(std::size_t ahead = 0) const { return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0'; }

    char get() {
        const char c = text_[pos_++];
        if (c == '\n') {
            ++line_;
        }
        return c;
    }

    void skip_ws() {
        while (!eof() && (peek() == ' ' || peek() == '\t')) {
            ++pos_;
        }
    }

    void skip_comment() {
        if (peek() == '#') {
            while (!eof() && peek() != '\n') {
                ++pos_;
            }
        }
    }

    // Whitespace, comments and newlines; used between lines and inside arrays.
    void skip_blank_lines() {
        while (!eof()) {
            skip_ws();
            skip_comment();
            if (peek() == '\r' && peek(1) == '\n') {
                ++pos_;
            }
            if (peek() != '\n') {
                return;
            }
            get();
        }
    }

    void end_of_line() {
        skip_ws();
        skip_comment();
        if (peek() == '\r') {
            ++pos_;
        }
        if (eof()) {
            return;
        }
        if (peek() != '\n') {
            fail(std::string("unexpected '") + peek() + "' after value");
        }
        get();
    }

    std::string simple_key() {
        if (peek() == '"') {
            return basic_string();
        }
        if (peek() == '\'') {
            return literal_string();
        }
        const std::size_t start = pos_;
        while (!eof() && is_bare_key_char(peek())) {
            ++pos_;
        }
        if (pos_ == start) {
            fail("expected a key");
        }
        return text_.substr(start, pos_ - start);
    }

    std::vector<std::string> dotted_key() {
        std::vector<std::string> parts;
        while (true) {
            skip_ws();
            parts.push_back(simple_key());
            skip_ws();
            if (peek() != '.') {
                return parts;
            }
            ++pos_;
        }
    }

    static std::string join(const std::vector<std::string>& parts) {
        std::string out;
        for (const auto& p : parts) {
            out += (out.empty() ? "" : ".") + p;
        }
        return out;
    }

    // Walks to (and creates) the object at `parts`, stepping into the last element of arrays of tables.
    json* descend(json& root, const std::vector<std::string>& parts, std::size_t count) {
        json* t = &root;
        for (std::size_t i = 0; i < count; ++i) {
            json& next = (*t)[parts[i]];
            if (next.is_null()) {
                next = json::object();
            }
            if (next.is_array() && !next.empty() && next.back().is_object()) {
                t = &next.back();
            } else if (next.is_object()) {
                t = &next;
            } else {
                fail("key '" + join({parts.begin(), parts.begin() + static_cast<std::ptrdiff_t>(i + 1)}) +
                     "' is not a table");
            }
        }
        return t;
    }

    json* header(json& root) {
        ++pos_;
        const bool array_of_tables = peek() == '[';
        if (array_of_tables) {
            ++pos_;
        }
        const auto parts = dotted_key();
        if (peek() != ']' || (array_of_tables && peek(1) != ']')) {
            fail("unterminated table header");
        }
        pos_ += array_of_tables ? 2 : 1;
        const std::string name = join(parts);

        json* parent = descend(root, parts, parts.size() - 1);
        json& slot = (*parent)[parts.back()];
        if (array_of_tables) {
            if (slot.is_null()) {
                slot = json::array();
            }
            if (!slot.is_array() || std::any_of(slot.begin(), slot.end(), [](const json& e) { return !e.is_object(); })) {
                fail("'" + name + "' is not an array of tables");
            }
            slot.push_back(json::object());
            // Sub-tables of the previous element may be defined again for this one.
            const std::string prefix = name + ".";
            std::erase_if(defined_tables_, [&](const std::string& t) { return t.rfind(prefix, 0) == 0; });
            return &slot.back();
        }
        if (!defined_tables_.insert(name).second) {
            fail("table [" + name + "] defined twice");
        }
        if (slot.is_null()) {
            slot = json::object();
        }
        if (!slot.is_object()) {
            fail("'" + name + "' is already a value");
        }
        return &slot;
    }

    void keyval(json& table) {
        const auto parts = dotted_key();
        if (peek() != '=') {
            fail("expected '=' after key '" + join(parts) + "'");
        }
        ++pos_;
        skip_ws();
        json* t = descend(table, parts, parts.size() - 1);
        if (t->contains(parts.back())) {
            fail("duplicate key '" + join(parts) + "'");
        }
        (*t)[parts.back()] = value();
    }

    json value() {
        const char c = peek();
        if (c == '"') {
            if (peek(1) == '"' && peek(2) == '"') {
                fail("multi-line strings are not supported");
            }
            return basic_string();
        }
        if (c == '\'') {
            return literal_string();
        }
        if (c == '[') {
            return array();
        }
        if (c == '{') {
            return inline_table();
        }
        if (text_.compare(pos_, 4, "true") == 0 && !is_bare_key_char(peek(4))) {
            pos_ += 4;
            return true;
        }
        if (text_.compare(pos_, 5, "false") == 0 && !is_bare_key_char(peek(5))) {
            pos_ += 5;
            return false;
        }
        return number();
    }

    std::string basic_string() {
        ++pos_;
        std::string out;
        while (true) {
            if (eof() || peek() == '\n') {
                fail("unterminated string");
            }
            const char c = get();
            if (c == '"') {
                return out;
            }
            if (c != '\\') {
                out += c;
                continue;
            }
            if (eof()) {
                fail("unterminated string");
            }
            switch (get()) {
            case '"':
                out += '"';
                break;
            case '\\':
                out += '\\';
                break;
            case 'n':
                out += '\n';
                break;
            case 't':
                out += '\t';
                break;
            case 'r':
                out += '\r';
                break;
            default:
                fail("unsupported escape sequence");
            }
        }
    }

    std::string literal_string() {
        ++pos_;
        const std::size_t start = pos_;
        while (!eof() && peek() != '\'' && peek() != '\n') {
            ++pos_;
        }
        if (peek() != '\'') {
            fail("unterminated string");
        }
        std::string out = text_.substr(start, pos_ - start);
        ++pos_;
        return out;
    }

    json array() {
        ++pos_;
        json out = json::array();
        while (true) {
            skip_blank_lines();
            if (peek() == ']') {
                ++pos_;
                return out;
            }
            if (eof()) {
                fail("unterminated array");
            }
            out.push_back(value());
            skip_blank_lines();
            if (peek() == ',') {
                ++pos_;
            } else if (peek() != ']') {
                fail("expected ',' or ']' in array");
            }
        }
    }

    json inline_table() {
        ++pos_;
        json out = json::object();
        skip_ws();
        if (peek() == '}') {
            ++pos_;
            return out;
        }
        while (true) {
            keyval(out);
            skip_ws();
            if (peek() == '}') {
                ++pos_;
                return out;
            }
            if (peek() != ',') {
                fail("expected ',' or '}' in inline table");
            }
            ++pos_;
        }
    }

    json number() {
        const std::size_t start = pos_;
        while (!eof() && (is_bare_key_char(peek()) || peek() == '.' || peek() == '+')) {
            ++pos_;
        }
        std::string token;
        for (char ch : text_.substr(start, pos_ - start)) {
            if (ch != '_') {
                token += ch;
            }
        }
        if (token.empty()) {
            fail("expected a value");
        }
        const bool is_float = token.find_first_of(".eE") != std::string::npos || token.find("inf") != std::string::npos ||
                              token.find("nan") != std::string::npos;
        const char* first = token.data() + (token.front() == '+' ? 1 : 0);
        const char* last = token.data() + token.size();
        if (is_float) {
            if (token.find("inf") != std::string::npos || token.find("nan") != std::string::npos) {
                fail("non-finite number '" + token + "'");
            }
            double d = 0.0;
            auto [ptr, ec] = std::from_chars(first, last, d);
            if (ec != std::errc() || ptr != last || !std::isfinite(d)) {
                fail("invalid number '" + token + "'");
            }
            return d;
        }
        std::int64_t i = 0;
        auto [ptr, ec] = std::from_chars(first, last, i);
        if (ec == std::errc() && ptr == last) {
            return i;
        }
        if (ec == std::errc::result_out_of_range && token.front() != '-') {
            std::uint64_t u = 0;
            auto [uptr, uec] = std::from_chars(first, last, u);
            if (uec == std::errc() && uptr == last) {
                return u;
            }
        }
        fail("invalid value '" + token + "'");
    }

    std::string text_;
    std::string source_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::set<std::string> defined_tables_;
};

bool is_table_array(const json& v) {
    return v.is_array() && !v.empty() && std::all_of(v.begin(), v.end(), [](const json& e) { return e.is_object(); });
}

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
        case '"':
            out += "\\\"";
            break;
        case '\\':
            out += "\\\\";
            break;
        case '\n':
            out += "\\n";
            break;
        case '\t':
            out += "\\t";
            break;
        case '\r':
            out += "\\r";
            break;
        default:
            out += c;
        }
    }
    return out + "\"";
}

std::string key_text(const std::string& k) {
    const bool bare = !k.empty() && std::all_of(k.begin(), k.end(), is_bare_key_char);
    return bare ? k : quote(k);
}

std::string format_double(double d) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", d);
    std::string s = buf;
    if (s.find_first_of(".eE") == std::string::npos) {
        s += ".0";
    }
    return s;
}

std::string scalar(const json& v) {
    switch (v.type()) {
    case json::value_t::string:
        return quote(v.get<std::string>());
    case json::value_t::boolean:
        return v.get<bool>() ? "true" : "false";
    case json::value_t::number_integer:
        return std::to_string(v.get<std::int64_t>());
    case json::value_t::number_unsigned:
        return std::to_string(v.get<std::uint64_t>());
    case json::value_t::number_float:
        if (!std::isfinite(v.get<double>())) {
            throw std::invalid_argument("toml: cannot write a non-finite number");
        }
        return format_double(v.get<double>());
    case json::value_t::array: {
        std::string out = "[";
        for (std::size_t i = 0; i < v.size(); ++i) {
            out += (i ? ", " : "") + scalar(v[i]);
        }
        return out + "]";
    }
    case json::value_t::object: {
        std::string out = "{";
        bool first = true;
        for (const auto& [k, e] : v.items()) {
            out += (first ? " " : ", ") + key_text(k) + " = " + scalar(e);
            first = false;
        }
        return out + (first ? "}" : " }");
    }
    default:
        throw std::invalid_argument("toml: cannot write a null value");
    }
}

void dump_table(std::ostringstream& out, const json& table, const std::string& path) {
    for (const auto& [k, v] : table.items()) {
        if (!v.is_object() && !is_table_array(v)) {
            out << key_text(k) << " = " << scalar(v) << "\n";
        }
    }
    for (const auto& [k, v] : table.items()) {
        const std::string sub = path.empty() ? key_text(k) : path + "." + key_text(k);
        if (v.is_object()) {
            out << "\n[" << sub << "]\n";
            dump_table(out, v, sub);
        } else if (is_table_array(v)) {
            for (const auto& e : v) {
                out << "\n[[" << sub << "]]\n";
                dump_table(out, e, sub);
            }
        }
    }
}

} // namespace

json parse(std::istream& in, const std::string& source) {
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), source);
}

json parse(const std::string& text, const std::string& source) { return Parser(text, source).run(); }

std::string dump(const json& doc) {
    if (!doc.is_object()) {
        throw std::invalid_argument("toml: document root must be a table");
    }
    std::ostringstream out;
    dump_table(out, doc, "");
    return out.str();
}

} // namespace uavnet::toml
