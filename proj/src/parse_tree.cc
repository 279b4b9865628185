// Copyright 2026 The secrel Authors.
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

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "secrel/corpus.h"

namespace secrel {
namespace {

class TreeReader {
 public:
  explicit TreeReader(std::string_view s) : s_(s) {}

  ParseTree read() {
    skip_space();
    if (pos_ >= s_.size()) throw ParseError("empty tree", pos_);
    if (s_[pos_] != '(') throw ParseError("expected '('", pos_);
    ParseTree root = read_node(/*allow_unlabelled=*/true);
    skip_space();
    if (pos_ != s_.size()) throw ParseError("trailing input after tree", pos_);
    if (root.label.empty()) {
      if (root.children.size() != 1 || root.children[0].is_leaf()) {
        throw ParseError("unlabelled node", 0);
      }
      ParseTree inner = std::move(root.children[0]);
      root = std::move(inner);
    }
    return root;
  }

 private:
  void skip_space() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  std::string read_atom() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && s_[pos_] != '(' && s_[pos_] != ')' &&
           !std::isspace(static_cast<unsigned char>(s_[pos_]))) {
      ++pos_;
    }
    return std::string(s_.substr(start, pos_ - start));
  }

  ParseTree read_node(bool allow_unlabelled) {
    std::size_t open = pos_;
    ++pos_;  // '('
    skip_space();
    if (pos_ >= s_.size()) throw ParseError("unexpected end of input", pos_);
    ParseTree node;
    if (s_[pos_] == ')') throw ParseError("empty node", open);
    if (s_[pos_] != '(') {
      node.label = read_atom();
    } else if (!allow_unlabelled) {
      throw ParseError("unlabelled node", open);
    }
    for (;;) {
      skip_space();
      if (pos_ >= s_.size()) throw ParseError("unexpected end of input", pos_);
      char c = s_[pos_];
      if (c == ')') {
        ++pos_;
        break;
      }
      if (c == '(') {
        node.children.push_back(read_node(false));
      } else {
        ParseTree leaf;
        leaf.label = read_atom();
        leaf.leaf_token = next_leaf_++;
        node.children.push_back(std::move(leaf));
      }
    }
    if (node.children.empty()) throw ParseError("empty node", open);
    return node;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  int next_leaf_ = 0;
};

void collect_leaves(const ParseTree &node, std::vector<const ParseTree *> &out) {
  if (node.is_leaf()) {
    out.push_back(&node);
    return;
  }
  for (const ParseTree &child : node.children) collect_leaves(child, out);
}

// Root-to-preterminal chain of nodes above the given leaf.
bool find_chain(const ParseTree &node, int token,
                std::vector<const ParseTree *> &chain) {
  if (node.is_leaf()) return node.leaf_token == token;
  chain.push_back(&node);
  for (const ParseTree &child : node.children) {
    if (find_chain(child, token, chain)) return true;
  }
  chain.pop_back();
  return false;
}

void write_tree(const ParseTree &node, std::string &out) {
  if (node.is_leaf()) {
    out += node.label;
    return;
  }
  out += '(';
  out += node.label;
  for (const ParseTree &child : node.children) {
    out += ' ';
    write_tree(child, out);
  }
  out += ')';
}

std::string unescape_ptb(const std::string &leaf) {
  if (leaf == "-LRB-") return "(";
  if (leaf == "-RRB-") return ")";
  if (leaf == "-LSB-") return "[";
  if (leaf == "-RSB-") return "]";
  if (leaf == "-LCB-") return "{";
  if (leaf == "-RCB-") return "}";
  return leaf;
}

void check_shape(const ParseTree &node) {
  if (node.is_leaf()) return;
  for (const ParseTree &child : node.children) {
    if (child.is_leaf() && node.children.size() != 1) {
      throw Error("leaf '" + child.label + "' is not the only child of its parent '" +
                  node.label + "'");
    }
    check_shape(child);
  }
}

void collect_preterminals(ParseTree &node, std::vector<ParseTree *> &out) {
  if (node.is_preterminal()) {
    out.push_back(&node);
    return;
  }
  for (ParseTree &child : node.children) collect_preterminals(child, out);
}

}  // namespace

ParseTree parse_bracketed_tree(std::string_view s) { return TreeReader(s).read(); }

std::string to_bracketed(const ParseTree &tree) {
  std::string out;
  write_tree(tree, out);
  return out;
}

ParseTree flat_tree(const Sentence &sentence) {
  if (sentence.tokens.empty()) throw Error("flat_tree: empty sentence");
  ParseTree root;
  root.label = "S";
  for (const Token &token : sentence.tokens) {
    ParseTree leaf;
    leaf.label = token.text;
    leaf.leaf_token = token.index;
    ParseTree pre;
    pre.label = token.pos;
    pre.children.push_back(std::move(leaf));
    root.children.push_back(std::move(pre));
  }
  return root;
}

std::vector<const ParseTree *> tree_leaves(const ParseTree &tree) {
  std::vector<const ParseTree *> out;
  collect_leaves(tree, out);
  return out;
}

std::vector<std::string> tree_path(const ParseTree &tree, int from_token, int to_token) {
  std::vector<const ParseTree *> a, b;
  if (!find_chain(tree, from_token, a) || !find_chain(tree, to_token, b)) {
    throw Error("tree_path: token is not a leaf of the tree");
  }
  std::size_t common = 0;
  while (common < a.size() && common < b.size() && a[common] == b[common]) ++common;
  std::vector<std::string> labels;
  // a's chain climbs from its preterminal up to the lowest common ancestor.
  for (std::size_t i = a.size(); i-- > common;) labels.push_back(a[i]->label);
  labels.push_back(a[common - 1]->label);
  for (std::size_t i = common; i < b.size(); ++i) labels.push_back(b[i]->label);
  return labels;
}

void attach_tree(Sentence &sentence, ParseTree tree) {
  check_shape(tree);
  std::vector<ParseTree *> preterminals;
  collect_preterminals(tree, preterminals);
  if (preterminals.size() != sentence.tokens.size()) {
    throw Error("tree has " + std::to_string(preterminals.size()) + " leaves but sentence has " +
                std::to_string(sentence.tokens.size()) + " tokens");
  }
  for (std::size_t i = 0; i < preterminals.size(); ++i) {
    ParseTree &pre = *preterminals[i];
    Token &token = sentence.tokens[i];
    ParseTree &leaf = pre.children[0];
    if (unescape_ptb(leaf.label) != token.text && leaf.label != token.text) {
      throw Error("leaf " + std::to_string(i) + " '" + leaf.label +
                  "' does not match token '" + token.text + "'");
    }
    leaf.leaf_token = static_cast<int>(i);
    if (token.pos.empty() || token.pos == kUntaggedPos) {
      token.pos = pre.label;
    } else if (token.pos != pre.label) {
      throw Error("preterminal '" + pre.label + "' over token " + std::to_string(i) +
                  " disagrees with tag '" + token.pos + "'");
    }
  }
  sentence.tree = std::move(tree);
  sentence.fallback_tree = false;
}

}  // namespace secrel
