#include "bucketree/tree.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "bucketree/error.hpp"

namespace bucketree {

namespace {

struct ValidationState {
  int bucket_size = 1;
  int size = 0;
  std::size_t nodes = 0;
  int labelled_nodes = 0;
  std::vector<int> all_labels;
};

void validate_node(const BucketNode& v, int parent_max, ValidationState& st) {
  const int b = st.bucket_size;
  if (v.capacity < 1 || v.capacity > b) {
    throw InvalidArgument("bucket capacity " + std::to_string(v.capacity) +
                          " outside [1, " + std::to_string(b) + "]");
  }
  if (!v.children.empty() && v.capacity != b) {
    throw InvalidArgument("internal bucket is not saturated");
  }
  ++st.nodes;
  st.size += v.capacity;
  int node_max = parent_max;
  if (!v.labels.empty()) {
    ++st.labelled_nodes;
    if (static_cast<int>(v.labels.size()) != v.capacity) {
      throw InvalidArgument("capacity does not match the number of labels");
    }
    for (std::size_t i = 0; i < v.labels.size(); ++i) {
      if (i > 0 && v.labels[i] <= v.labels[i - 1]) {
        throw InvalidArgument("labels within a bucket must increase");
      }
      if (v.labels[i] <= parent_max) {
        throw InvalidArgument("labels must increase along root paths");
      }
      st.all_labels.push_back(v.labels[i]);
    }
    node_max = v.labels.back();
  }
  for (const auto& c : v.children) validate_node(c, node_max, st);
}

void collect_preorder(const BucketNode& v, std::vector<const BucketNode*>& out) {
  out.push_back(&v);
  for (const auto& c : v.children) collect_preorder(c, out);
}

BucketNode strip(const BucketNode& v) {
  BucketNode s;
  s.capacity = v.capacity;
  s.children.reserve(v.children.size());
  for (const auto& c : v.children) s.children.push_back(strip(c));
  return s;
}

BucketNode* find_preorder(BucketNode& v, std::size_t& remaining) {
  if (remaining == 0) return &v;
  --remaining;
  for (auto& c : v.children) {
    if (auto* hit = find_preorder(c, remaining)) return hit;
  }
  return nullptr;
}

void encode_node(const BucketNode& v, std::string& out) {
  out += std::to_string(v.capacity);
  out += ':';
  for (std::size_t i = 0; i < v.labels.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(v.labels[i]);
  }
  out += ':';
  out += std::to_string(v.children.size());
  out += ';';
  for (const auto& c : v.children) encode_node(c, out);
}

class Decoder {
 public:
  explicit Decoder(std::string_view s) : s_(s) {}

  int integer() {
    int value = 0;
    const auto* begin = s_.data() + pos_;
    const auto* end = s_.data() + s_.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr == begin) fail("expected an integer");
    pos_ += static_cast<std::size_t>(ptr - begin);
    return value;
  }

  void expect(char c) {
    if (pos_ >= s_.size() || s_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  bool peek(char c) const { return pos_ < s_.size() && s_[pos_] == c; }
  bool done() const { return pos_ == s_.size(); }

  BucketNode node(int depth) {
    if (depth > 100000) fail("nesting too deep");
    BucketNode v;
    v.capacity = integer();
    expect(':');
    while (!peek(':')) {
      v.labels.push_back(integer());
      if (!peek(':')) expect(',');
    }
    expect(':');
    const int children = integer();
    expect(';');
    if (children < 0) fail("negative child count");
    for (int i = 0; i < children; ++i) v.children.push_back(node(depth + 1));
    return v;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw DecodeError("malformed tree encoding at offset " + std::to_string(pos_) + ": " + what);
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
};

nlohmann::json node_to_json(const BucketNode& v) {
  nlohmann::json j;
  j["labels"] = v.labels;
  if (v.labels.empty()) j["capacity"] = v.capacity;
  j["children"] = nlohmann::json::array();
  for (const auto& c : v.children) j["children"].push_back(node_to_json(c));
  return j;
}

BucketNode node_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("labels") || !j.contains("children")) {
    throw DecodeError("tree node must be an object with labels and children");
  }
  BucketNode v;
  v.labels = j.at("labels").get<std::vector<int>>();
  if (j.contains("capacity")) {
    v.capacity = j.at("capacity").get<int>();
  } else {
    v.capacity = static_cast<int>(v.labels.size());
  }
  for (const auto& c : j.at("children")) v.children.push_back(node_from_json(c));
  return v;
}

void display_node(const BucketNode& v, std::ostringstream& os) {
  os << '{';
  if (v.labels.empty()) {
    os << '#' << v.capacity;
  } else {
    for (std::size_t i = 0; i < v.labels.size(); ++i) os << (i ? "," : "") << v.labels[i];
  }
  os << '}';
  if (!v.children.empty()) {
    os << '[';
    for (std::size_t i = 0; i < v.children.size(); ++i) {
      if (i) os << ',';
      display_node(v.children[i], os);
    }
    os << ']';
  }
}

}  // namespace

BucketTree::BucketTree(int bucket_size, BucketNode root)
    : bucket_size_(bucket_size), root_(std::move(root)) {
  if (bucket_size_ < 1) throw InvalidArgument("bucket size b must be at least 1");
  ValidationState st;
  st.bucket_size = bucket_size_;
  validate_node(root_, 0, st);
  size_ = st.size;
  node_count_ = st.nodes;
  if (st.labelled_nodes != 0 && static_cast<std::size_t>(st.labelled_nodes) != st.nodes) {
    throw InvalidArgument("tree mixes labelled and shape-only buckets");
  }
  labelled_ = st.labelled_nodes != 0;
  if (labelled_) {
    std::sort(st.all_labels.begin(), st.all_labels.end());
    for (int i = 0; i < size_; ++i) {
      if (st.all_labels[static_cast<std::size_t>(i)] != i + 1) {
        throw InvalidArgument("labels must be exactly {1, ..., |T|}");
      }
    }
  }
}

BucketTree BucketTree::singleton(int bucket_size) {
  return BucketTree(bucket_size, BucketNode{{1}, 1, {}});
}

std::vector<const BucketNode*> BucketTree::preorder() const {
  std::vector<const BucketNode*> out;
  out.reserve(node_count_);
  collect_preorder(root_, out);
  return out;
}

BucketTree BucketTree::shape() const { return BucketTree(bucket_size_, strip(root_)); }

BucketNode& node_at(BucketNode& root, std::size_t preorder_index) {
  std::size_t remaining = preorder_index;
  if (auto* hit = find_preorder(root, remaining)) return *hit;
  throw InvalidArgument("node index " + std::to_string(preorder_index) + " out of range");
}

int NodeCensus::unsaturated_count(int k) const {
  if (k <= 0 || k >= static_cast<int>(unsaturated.size())) return 0;
  return unsaturated[static_cast<std::size_t>(k)];
}

int NodeCensus::saturated_count(int degree) const {
  auto it = saturated.find(degree);
  return it == saturated.end() ? 0 : it->second;
}

NodeCensus census(const BucketTree& t) {
  NodeCensus c;
  const int b = t.bucket_size();
  c.unsaturated.assign(static_cast<std::size_t>(b), 0);
  for (const BucketNode* v : t.preorder()) {
    if (v->capacity == b) {
      ++c.saturated[v->degree()];
    } else {
      ++c.unsaturated[static_cast<std::size_t>(v->capacity)];
    }
  }
  return c;
}

std::string canonical_encode(const BucketTree& t) {
  std::string out = "b" + std::to_string(t.bucket_size()) + "|";
  encode_node(t.root(), out);
  return out;
}

BucketTree canonical_decode(std::string_view encoding) {
  Decoder d(encoding);
  d.expect('b');
  const int b = d.integer();
  d.expect('|');
  BucketNode root = d.node(0);
  if (!d.done()) d.fail("trailing characters");
  try {
    return BucketTree(b, std::move(root));
  } catch (const InvalidArgument& e) {
    throw DecodeError(std::string("encoding decodes to an invalid tree: ") + e.what());
  }
}

nlohmann::json to_json(const BucketTree& t) {
  return nlohmann::json{{"b", t.bucket_size()}, {"root", node_to_json(t.root())}};
}

BucketTree tree_from_json(const nlohmann::json& j) {
  try {
    if (!j.is_object() || !j.contains("b") || !j.contains("root")) {
      throw DecodeError("tree JSON must have 'b' and 'root'");
    }
    return BucketTree(j.at("b").get<int>(), node_from_json(j.at("root")));
  } catch (const nlohmann::json::exception& e) {
    throw DecodeError(std::string("tree JSON: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw DecodeError(std::string("tree JSON describes an invalid tree: ") + e.what());
  }
}

std::string to_display_string(const BucketTree& t) {
  std::ostringstream os;
  display_node(t.root(), os);
  return os.str();
}

}  // namespace bucketree
