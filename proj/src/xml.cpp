// Copyright 2026 The typoclust Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Minimal XML 1.0 reader: elements, attributes, character data, CDATA,
// comments, processing instructions and a skipped DOCTYPE. No DTD
// processing and no namespaces.

#include <algorithm>
#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>

#include "typoclust/error.hpp"
#include "typoclust/ingest.hpp"
#include "typoclust/util.hpp"

namespace typoclust::ingest {
namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

bool is_name_start(char c) {
  const auto u = static_cast<unsigned char>(c);
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' ||
         c == ':' || u >= 0x80;
}

bool is_name_char(char c) {
  return is_name_start(c) || (c >= '0' && c <= '9') || c == '-' || c == '.';
}

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

class Parser {
 public:
  Parser(std::string_view input, std::string doc_id)
      : in_(input), doc_id_(std::move(doc_id)) {}

  RawDocument run() {
    if (in_.substr(0, 3) == "\xEF\xBB\xBF") advance(3);
    skip_misc(/*allow_doctype=*/true);
    if (at_end() || peek() != '<') fail("expected root element");
    parse_element();
    skip_misc(/*allow_doctype=*/false);
    if (!at_end()) fail("content after the root element");
    return RawDocument(std::move(doc_id_), std::move(elements_),
                       std::move(warnings_));
  }

 private:
  [[noreturn]] void fail(const std::string& message) const {
    throw MalformedXml(doc_id_ + ": " + message, line_, column_);
  }

  bool at_end() const { return pos_ >= in_.size(); }
  char peek() const { return in_[pos_]; }
  bool starts_with(std::string_view s) const {
    return in_.substr(pos_, s.size()) == s;
  }

  void advance(std::size_t n = 1) {
    for (std::size_t i = 0; i < n && pos_ < in_.size(); ++i, ++pos_) {
      if (in_[pos_] == '\n') {
        ++line_;
        column_ = 1;
      } else {
        ++column_;
      }
    }
  }

  void expect(std::string_view s) {
    if (!starts_with(s)) fail("expected '" + std::string(s) + "'");
    advance(s.size());
  }

  void skip_space() {
    while (!at_end() && is_space(peek())) advance();
  }

  // Consumes up to and including the terminator.
  std::string_view take_until(std::string_view terminator,
                              const char* what) {
    const auto end = in_.find(terminator, pos_);
    if (end == std::string_view::npos) fail(std::string("unterminated ") + what);
    std::string_view body = in_.substr(pos_, end - pos_);
    advance(end - pos_ + terminator.size());
    return body;
  }

  void skip_misc(bool allow_doctype) {
    for (;;) {
      skip_space();
      if (starts_with("<?")) {
        advance(2);
        take_until("?>", "processing instruction");
      } else if (starts_with("<!--")) {
        advance(4);
        take_until("-->", "comment");
      } else if (allow_doctype && starts_with("<!DOCTYPE")) {
        skip_doctype();
        allow_doctype = false;
      } else {
        return;
      }
    }
  }

  void skip_doctype() {
    advance(9);
    int bracket = 0;
    char quote = 0;
    while (!at_end()) {
      const char c = peek();
      if (quote) {
        if (c == quote) quote = 0;
      } else if (c == '"' || c == '\'') {
        quote = c;
      } else if (c == '[') {
        ++bracket;
      } else if (c == ']') {
        --bracket;
      } else if (c == '>' && bracket == 0) {
        advance();
        return;
      }
      advance();
    }
    fail("unterminated DOCTYPE");
  }

  std::string parse_name() {
    if (at_end() || !is_name_start(peek())) fail("expected a name");
    const auto start = pos_;
    while (!at_end() && is_name_char(peek())) advance();
    return std::string(in_.substr(start, pos_ - start));
  }

  // At '&'. Appends the decoded reference.
  void parse_reference(std::string& out) {
    const auto ref_line = line_;
    const auto ref_column = column_;
    advance();
    const auto end = in_.find(';', pos_);
    if (end == std::string_view::npos || end - pos_ > 32) {
      fail("unterminated entity reference");
    }
    const std::string_view body = in_.substr(pos_, end - pos_);
    advance(body.size() + 1);
    if (body.empty()) fail("empty entity reference");
    if (body.front() == '#') {
      std::uint32_t cp = 0;
      const bool hex = body.size() > 1 && (body[1] == 'x' || body[1] == 'X');
      const std::string_view digits = body.substr(hex ? 2 : 1);
      if (digits.empty()) fail("empty character reference");
      for (char c : digits) {
        int v;
        if (c >= '0' && c <= '9') v = c - '0';
        else if (hex && c >= 'a' && c <= 'f') v = c - 'a' + 10;
        else if (hex && c >= 'A' && c <= 'F') v = c - 'A' + 10;
        else fail("bad character reference");
        cp = cp * (hex ? 16 : 10) + static_cast<std::uint32_t>(v);
        if (cp > 0x10FFFF) fail("character reference out of range");
      }
      append_utf8(out, cp);
      return;
    }
    static const std::unordered_map<std::string_view, char> builtins = {
        {"lt", '<'}, {"gt", '>'}, {"amp", '&'}, {"apos", '\''}, {"quot", '"'}};
    if (auto it = builtins.find(body); it != builtins.end()) {
      out += it->second;
      return;
    }
    for (char c : body) {
      if (!is_name_char(c)) fail("bad entity reference");
    }
    out.append(body);
    warnings_.push_back("unknown entity '&" + std::string(body) +
                        ";' replaced by its name at line " +
                        std::to_string(ref_line) + ", column " +
                        std::to_string(ref_column));
  }

  std::string parse_attribute_value() {
    if (at_end() || (peek() != '"' && peek() != '\'')) {
      fail("expected quoted attribute value");
    }
    const char quote = peek();
    advance();
    std::string value;
    while (!at_end() && peek() != quote) {
      if (peek() == '<') fail("'<' in attribute value");
      if (peek() == '&') {
        parse_reference(value);
      } else {
        value += peek();
        advance();
      }
    }
    if (at_end()) fail("unterminated attribute value");
    advance();
    return value;
  }

  // At '<' of a start tag. Returns the new element's id.
  ElementId parse_element() {
    advance();
    const ElementId id{elements_.size()};
    elements_.emplace_back();
    std::string name = parse_name();

    std::vector<std::pair<std::string, std::string>> attributes;
    for (;;) {
      const bool had_space = !at_end() && is_space(peek());
      skip_space();
      if (at_end()) fail("unexpected end of input in start tag");
      if (starts_with("/>")) {
        advance(2);
        elements_[id.index].name = std::move(name);
        elements_[id.index].attributes = std::move(attributes);
        return id;
      }
      if (peek() == '>') {
        advance();
        break;
      }
      if (!had_space) fail("expected whitespace before attribute");
      std::string attr = parse_name();
      skip_space();
      expect("=");
      skip_space();
      std::string value = parse_attribute_value();
      const bool duplicate =
          std::any_of(attributes.begin(), attributes.end(),
                      [&](const auto& a) { return a.first == attr; });
      if (duplicate) fail("duplicate attribute '" + attr + "'");
      attributes.emplace_back(std::move(attr), std::move(value));
    }
    elements_[id.index].name = name;
    elements_[id.index].attributes = std::move(attributes);

    std::vector<Content> children;
    std::string text;
    auto flush_text = [&] {
      if (!text.empty()) {
        children.emplace_back(std::move(text));
        text.clear();
      }
    };
    for (;;) {
      if (at_end()) fail("unexpected end of input inside <" + name + ">");
      if (starts_with("</")) {
        advance(2);
        const std::string closing = parse_name();
        if (closing != name) {
          fail("mismatched end tag </" + closing + ">, expected </" + name +
               ">");
        }
        skip_space();
        expect(">");
        break;
      }
      if (starts_with("<!--")) {
        advance(4);
        take_until("-->", "comment");
      } else if (starts_with("<![CDATA[")) {
        advance(9);
        text.append(take_until("]]>", "CDATA section"));
      } else if (starts_with("<?")) {
        advance(2);
        take_until("?>", "processing instruction");
      } else if (peek() == '<') {
        flush_text();
        children.emplace_back(parse_element());
      } else if (peek() == '&') {
        parse_reference(text);
      } else {
        text += peek();
        advance();
      }
    }
    flush_text();
    elements_[id.index].children = std::move(children);
    return id;
  }

  std::string_view in_;
  std::string doc_id_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
  std::vector<Element> elements_;
  std::vector<std::string> warnings_;
};

}  // namespace

RawDocument parse_xml(std::string_view xml, std::string doc_id) {
  return Parser(xml, std::move(doc_id)).run();
}

RawDocument parse_document(const std::filesystem::path& path) {
  const std::string content = read_file(path);
  return parse_xml(content, path.stem().string());
}

}  // namespace typoclust::ingest
