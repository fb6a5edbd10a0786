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

#include <algorithm>
#include <set>

#include "typoclust/error.hpp"
#include "typoclust/ingest.hpp"

namespace typoclust::ingest {

RawDocument::RawDocument(std::string doc_id, std::vector<Element> elements,
                         std::vector<std::string> warnings)
    : doc_id_(std::move(doc_id)),
      elements_(std::move(elements)),
      warnings_(std::move(warnings)) {
  if (doc_id_.empty()) throw DataError("document id must not be empty");
  if (elements_.empty()) {
    throw MalformedXml(doc_id_ + ": no root element", 1, 1);
  }
}

namespace {

void collect_text(const RawDocument& doc, ElementId id, std::string& out) {
  for (const Content& child : doc.element(id).children) {
    if (const auto* text = std::get_if<std::string>(&child)) {
      out += *text;
    } else {
      out += ' ';
      collect_text(doc, std::get<ElementId>(child), out);
      out += ' ';
    }
  }
}

bool is_ws(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

}  // namespace

std::string RawDocument::text_content(ElementId id) const {
  std::string raw;
  collect_text(*this, id, raw);
  return normalize_whitespace(raw);
}

std::string normalize_whitespace(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char c : text) {
    if (is_ws(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out += ' ';
    pending_space = false;
    out += c;
  }
  return out;
}

ElementSelector ElementSelector::parse(std::string_view source) {
  if (source.empty()) throw InvalidSelector("empty selector");
  std::vector<Step> steps;
  std::size_t pos = 0;
  bool descendant = false;
  // Leading slashes: '/' is the implicit root anchor, '//' floats the first
  // step anywhere in the tree.
  std::size_t slashes = 0;
  while (pos < source.size() && source[pos] == '/') {
    ++slashes;
    ++pos;
  }
  descendant = slashes >= 2;
  while (pos < source.size()) {
    const auto next = source.find('/', pos);
    const auto end = next == std::string_view::npos ? source.size() : next;
    std::string name(source.substr(pos, end - pos));
    for (char c : name) {
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '[' ||
          c == ']' || c == '@' || c == '*') {
        throw InvalidSelector("unsupported character in selector step '" +
                              name + "'");
      }
    }
    steps.push_back(Step{std::move(name), descendant});
    if (next == std::string_view::npos) break;
    pos = next;
    slashes = 0;
    while (pos < source.size() && source[pos] == '/') {
      ++slashes;
      ++pos;
    }
    if (pos == source.size()) {
      throw InvalidSelector("selector ends with '/': " + std::string(source));
    }
    descendant = slashes >= 2;
  }
  if (steps.empty()) throw InvalidSelector("selector has no element name");
  return ElementSelector(std::move(steps));
}

std::string ElementSelector::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < steps_.size(); ++i) {
    if (steps_[i].descendant) {
      out += "//";
    } else if (i > 0) {
      out += '/';
    }
    out += steps_[i].name;
  }
  return out;
}

namespace {

// NFA over the selector steps: state i means "i steps consumed".
using StateSet = std::vector<bool>;

StateSet advance_states(const std::vector<ElementSelector::Step>& steps,
                        const StateSet& states, const std::string& name) {
  StateSet next(steps.size() + 1, false);
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (!states[i]) continue;
    if (steps[i].name == name) next[i + 1] = true;
    if (steps[i].descendant) next[i] = true;
  }
  return next;
}

void match_walk(const RawDocument& doc,
                const std::vector<ElementSelector::Step>& steps, ElementId id,
                const StateSet& parent_states, std::vector<ElementId>& out) {
  const Element& element = doc.element(id);
  const StateSet states = advance_states(steps, parent_states, element.name);
  if (states[steps.size()]) {
    out.push_back(id);
    return;
  }
  if (std::none_of(states.begin(), states.end(), [](bool b) { return b; })) {
    return;
  }
  for (const Content& child : element.children) {
    if (const auto* child_id = std::get_if<ElementId>(&child)) {
      match_walk(doc, steps, *child_id, states, out);
    }
  }
}

}  // namespace

std::vector<ElementId> match_elements(const RawDocument& doc,
                                      const ElementSelector& selector) {
  const auto& steps = selector.steps();
  StateSet initial(steps.size() + 1, false);
  initial[0] = true;
  std::vector<ElementId> out;
  match_walk(doc, steps, doc.root_id(), initial, out);
  return out;
}

ExtractedText select_elements(const RawDocument& doc,
                              const ElementSelector& selector) {
  ExtractedText result{doc.doc_id(), {}};
  for (ElementId id : match_elements(doc, selector)) {
    std::string text = doc.text_content(id);
    if (!text.empty()) result.fragments.push_back(std::move(text));
  }
  return result;
}

ExtractionResult extract_experiment_texts(
    std::span<const RawDocument> corpus,
    std::span<const ElementSelector> selectors) {
  ExtractionResult result;
  for (const RawDocument& doc : corpus) {
    ExtractedText merged{doc.doc_id(), {}};
    for (const ElementSelector& selector : selectors) {
      ExtractedText part = select_elements(doc, selector);
      std::move(part.fragments.begin(), part.fragments.end(),
                std::back_inserter(merged.fragments));
    }
    if (merged.fragments.empty()) {
      result.excluded.push_back(doc.doc_id());
    } else {
      result.texts.push_back(std::move(merged));
    }
  }
  return result;
}

std::vector<RawDocument> load_corpus(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    throw IoError("corpus directory not found: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    if (entry.path().extension() == ".xml") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end(), [](const auto& a, const auto& b) {
    return a.stem().string() < b.stem().string();
  });
  std::vector<RawDocument> corpus;
  corpus.reserve(files.size());
  std::set<std::string> seen;
  for (const auto& file : files) {
    corpus.push_back(parse_document(file));
    if (!seen.insert(corpus.back().doc_id()).second) {
      throw DataError("duplicate document id: " + corpus.back().doc_id());
    }
  }
  return corpus;
}

}  // namespace typoclust::ingest
