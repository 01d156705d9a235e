#include "uasforge/codegen.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include <json.hpp>

#include "uasforge/error.hpp"

namespace uasforge {

// ---------------------------------------------------------------------------
// FileTree

void FileTree::add(std::string path, std::string content) {
  if (path.empty() || path.front() == '/' || path.find('\\') != std::string::npos)
    throw Error("InvalidPath", "invalid generated path '" + path + "'");
  std::istringstream parts(path);
  for (std::string seg; std::getline(parts, seg, '/');)
    if (seg.empty() || seg == "." || seg == "..")
      throw Error("InvalidPath", "invalid generated path '" + path + "'");
  auto it = std::lower_bound(entries.begin(), entries.end(), path,
                             [](const FileEntry &e, const std::string &p) { return e.path < p; });
  if (it != entries.end() && it->path == path)
    throw Error("IdentifierCollision", "two generated files named '" + path + "'");
  entries.insert(it, FileEntry{std::move(path), std::move(content)});
}

const FileEntry *FileTree::find(std::string_view path) const {
  for (const auto &e : entries)
    if (e.path == path)
      return &e;
  return nullptr;
}

std::set<std::string> FileTree::directories() const {
  std::set<std::string> out;
  for (const auto &e : entries)
    for (auto pos = e.path.find('/'); pos != std::string::npos; pos = e.path.find('/', pos + 1))
      out.insert(e.path.substr(0, pos));
  return out;
}

// ---------------------------------------------------------------------------
// Type mapping

std::map<std::string, std::string> default_type_map() {
  return {{"Base::Integer", "int32_t"}, {"Base::Unsigned16", "uint16_t"}, {"Base::Boolean", "bool"},
          {"Base::Float", "float"}};
}

std::map<std::string, std::string> load_type_map(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw Error("ConfigError", "cannot read type map '" + path + "'");
  try {
    auto j = nlohmann::json::parse(in);
    std::map<std::string, std::string> out;
    for (const auto &[k, v] : j.items())
      out[k] = v.get<std::string>();
    return out;
  } catch (const nlohmann::json::exception &e) {
    throw Error("ConfigError", "invalid type map '" + path + "': " + e.what());
  }
}

namespace {

std::string upper(std::string s) {
  for (auto &c : s)
    c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

/// Include path of `file` as seen from a file in directory `from`.
std::string relative_include(const std::string &from, const std::string &file) {
  auto split = [](const std::string &p) {
    std::vector<std::string> out;
    std::istringstream in(p);
    for (std::string s; std::getline(in, s, '/');)
      if (!s.empty())
        out.push_back(s);
    return out;
  };
  auto a = split(from), b = split(file);
  std::size_t common = 0;
  while (common < a.size() && common + 1 < b.size() && a[common] == b[common])
    ++common;
  std::string out;
  for (std::size_t i = common; i < a.size(); ++i)
    out += "../";
  for (std::size_t i = common; i < b.size(); ++i)
    out += b[i] + (i + 1 < b.size() ? "/" : "");
  return out;
}

bool is_port(const FeatureInstance &f) {
  auto v = f.decl->variant;
  return v == FeatureVariant::data_port || v == FeatureVariant::event_port || v == FeatureVariant::event_data_port;
}

struct TypeDef {
  std::string qualified;
  std::string text;
  std::vector<std::string> deps;
};

class TypeTable {
public:
  TypeTable(const PackageSet &packages, const CodegenOptions &options) : packages_(packages), options_(options) {}

  std::string text_of(const ResolvedClassifier &rc) {
    const std::string qn = rc.qualified_name();
    if (auto it = options_.type_map.find(qn); it != options_.type_map.end())
      return it->second;
    const std::string name = rc.type_name();
    if (auto it = defs_.find(name); it != defs_.end()) {
      if (it->second.qualified != qn)
        throw Error("IdentifierCollision",
                    "data classifiers " + it->second.qualified + " and " + qn + " both map to '" + name + "'");
      return name;
    }
    if (in_progress_.count(qn))
      throw Error("UnmappedDataType", "data classifier " + qn + " contains itself");
    in_progress_.insert(qn);
    TypeDef def;
    def.qualified = qn;
    auto fields = data_fields(rc);
    if (!fields.empty()) {
      std::string body = "struct " + name + " {\n";
      for (const auto *f : fields) {
        auto frc = resolve_classifier(packages_, f->classifier, rc.package);
        std::string t = text_of(frc);
        if (defs_.count(t))
          def.deps.push_back(t);
        body += "  " + t + " " + f->name + ";\n";
      }
      def.text = body + "};\n";
    } else {
      auto lineage = data_lineage(packages_, rc);
      if (lineage.size() < 2)
        throw Error("UnmappedDataType", "data classifier " + qn + " has no type mapping, base type or fields");
      std::string base = text_of(lineage[1]);
      if (defs_.count(base))
        def.deps.push_back(base);
      def.text = "typedef " + base + " " + name + ";\n";
    }
    in_progress_.erase(qn);
    defs_.emplace(name, std::move(def));
    return name;
  }

  std::string port_type(const FeatureInstance &f) { return f.data_type ? text_of(*f.data_type) : "bool"; }

  /// Definitions with dependencies first, otherwise by name.
  std::string definitions() const {
    std::string out;
    std::set<std::string> done;
    std::function<void(const std::string &)> emit = [&](const std::string &n) {
      if (!done.insert(n).second)
        return;
      const auto &d = defs_.at(n);
      for (const auto &dep : d.deps)
        emit(dep);
      out += d.text;
    };
    for (const auto &[n, d] : defs_)
      emit(n);
    return out;
  }

  const std::map<std::string, TypeDef> &defs() const { return defs_; }

private:
  const PackageSet &packages_;
  const CodegenOptions &options_;
  std::map<std::string, TypeDef> defs_;
  std::set<std::string> in_progress_;
};

struct ClassInfo {
  std::string id;
  ComponentKind kind = ComponentKind::system;
  std::string qualified;
  std::vector<const ComponentInstance *> instances; // preorder
  std::string dir;                                  // folder holding its files
};

class Generator {
public:
  Generator(const InstanceModel &model, const ComponentInstance &root, const CodegenOptions &options)
      : model_(model), root_(root), options_(options), types_(model.packages(), options) {}

  FileTree run() {
    collect(root_, root_.classifier.type_name());
    FileTree tree;
    tree.root = root_.classifier.type_name();
    // Root header first so its data types are complete before other units use them.
    for (const auto &id : order_) {
      const auto &ci = classes_.at(id);
      if (ci.kind == ComponentKind::system)
        gen_system(ci, tree);
      else if (ci.kind == ComponentKind::process)
        gen_process(ci, tree);
      else if (ci.kind == ComponentKind::thread)
        gen_thread(ci, tree);
    }
    const std::string root_file = header_path(classes_.at(root_.classifier.type_name()));
    for (auto &e : tree.entries)
      if (e.path == root_file)
        e.content = root_header_prefix() + e.content;
    return tree;
  }

private:
  // --- collection -----------------------------------------------------------

  void collect(const ComponentInstance &c, const std::string &dir) {
    switch (c.kind) {
    case ComponentKind::system:
    case ComponentKind::process:
    case ComponentKind::thread:
      break;
    case ComponentKind::data:
    case ComponentKind::subprogram:
      return;
    default:
      throw Error("UnsupportedKindInSoftwareTree",
                  std::string(to_string(c.kind)) + " '" + c.path + "' inside the software tree");
    }
    const std::string id = c.classifier.type_name();
    auto [it, inserted] = classes_.try_emplace(id);
    ClassInfo &ci = it->second;
    if (inserted) {
      ci.id = id;
      ci.kind = c.kind;
      ci.qualified = c.classifier.qualified_name();
      ci.dir = dir;
      order_.push_back(id);
    } else if (ci.qualified != c.classifier.qualified_name()) {
      throw Error("IdentifierCollision",
                  "classifiers " + ci.qualified + " and " + c.classifier.qualified_name() + " share identifier '" + id + "'");
    }
    index_[&c] = static_cast<int>(ci.instances.size());
    ci.instances.push_back(&c);
    for (const auto &child : c.children) {
      const std::string child_dir = child->kind == ComponentKind::system ? dir + "/" + child->classifier.type_name() : dir;
      collect(*child, child_dir);
    }
  }

  void claim_name(const std::string &name, const std::string &what) {
    if (!names_.insert(name).second)
      throw Error("IdentifierCollision", "generated identifier '" + name + "' is ambiguous (" + what + ")");
  }

  static std::string header_path(const ClassInfo &ci) { return ci.dir + "/" + ci.id + ".hpp"; }
  static std::string source_path(const ClassInfo &ci) { return ci.dir + "/" + ci.id + ".cpp"; }

  const ClassInfo &info_of(const ComponentInstance &c) const { return classes_.at(c.classifier.type_name()); }

  std::string include_of(const ClassInfo &from, const ClassInfo &target) const {
    return "#include \"" + relative_include(from.dir, header_path(target)) + "\"\n";
  }

  std::string port_ref(const FeatureInstance &f) const {
    const ComponentInstance &owner = *f.owner;
    return owner.classifier.type_name() + "_ports(" + std::to_string(index_.at(&owner)) + ")." + f.name;
  }

  static std::string guard_open(const std::string &id) {
    return "#ifndef " + upper(id) + "_HPP\n#define " + upper(id) + "_HPP\n\n";
  }
  static std::string guard_close(const std::string &id) { return "\n#endif // " + upper(id) + "_HPP\n"; }

  std::string period_of(const ComponentInstance &thread) const {
    auto p = lookup_property(thread, "Period");
    if (!p || !p->as_int())
      throw Error("MissingPeriod", "thread '" + thread.path + "' has no Period");
    std::int64_t v = p->as_int()->value;
    const std::string &unit = p->as_int()->unit;
    if (unit == "sec" || unit == "s")
      v *= 1000;
    else if (unit == "us")
      v /= 1000;
    return std::to_string(v);
  }

  std::string relative_path(const ComponentInstance &c) const {
    if (&c == &root_)
      return c.name;
    return c.path.substr(root_.path.size() + 1);
  }

  std::string entry_point(const ComponentInstance &thread) const {
    int i = index_.at(&thread);
    return "TaskEntryPoint_" + thread.classifier.type_name() + (i == 0 ? "" : "_" + std::to_string(i));
  }

  std::string status_name(const ComponentInstance &thread) const {
    std::string s = relative_path(thread);
    std::replace(s.begin(), s.end(), '.', '_');
    return s + "_status";
  }

  std::vector<const ComponentInstance *> children_of_kind(const ComponentInstance &c, ComponentKind k) const {
    std::vector<const ComponentInstance *> out;
    for (const auto &ch : c.children)
      if (ch->kind == k)
        out.push_back(ch.get());
    return out;
  }

  // --- connections ----------------------------------------------------------

  std::string comm_body(const ClassInfo &ci) const {
    std::string out;
    for (const auto *inst : ci.instances) {
      for (const auto &conn : model_.connections()) {
        if (conn.owner != inst || !is_port(*conn.source) || !is_port(*conn.dest))
          continue;
        out += "  " + port_ref(*conn.dest) + " = " + port_ref(*conn.source) + "; // " + conn.name + "\n";
      }
      if (inst->classifier.impl)
        for (const auto &flow : inst->classifier.impl->flows) {
          out += "  // flow " + flow.name + ":";
          for (std::size_t i = 0; i < flow.segments.size(); ++i)
            out += (i ? " -> " : " ") + flow.segments[i];
          out += "\n";
        }
    }
    return out;
  }

  // --- units ----------------------------------------------------------------

  std::string root_header_prefix() {
    std::string out = guard_open(root_.classifier.type_name());
    out += "#include <cstdint>\n\n#include \"" + options_.runtime_header + "\"\n\n";
    out += "// Data types\n" + types_.definitions() + "\n";
    out += "// Port variables, one slot per instance\n" + port_storage_;
    return out;
  }

  void register_ports(const ClassInfo &ci) {
    const std::string sname = ci.id + "_Ports";
    claim_name(sname, "port struct");
    claim_name(ci.id + "_ports", "port storage");
    std::string s = "struct " + sname + " {\n";
    for (const auto &f : ci.instances.front()->features)
      if (is_port(f))
        s += "  " + types_.port_type(f) + " " + f.name + ";\n";
    s += "};\n";
    s += "inline " + sname + " &" + ci.id + "_ports(int instance) {\n";
    s += "  static " + sname + " slots[" + std::to_string(ci.instances.size()) + "];\n";
    s += "  return slots[instance];\n}\n\n";
    port_storage_ += s;
  }

  void gen_system(const ClassInfo &ci, FileTree &tree) {
    register_ports(ci);
    const ComponentInstance &first = *ci.instances.front();
    const bool is_root = &first == &root_;
    std::string h;
    if (!is_root) {
      h += guard_open(ci.id);
      const ClassInfo &parent = info_of(*first.parent);
      h += include_of(ci, parent) + "\n";
    }
    auto data = children_of_kind(first, ComponentKind::data);
    if (!data.empty()) {
      h += "// Shared data\n";
      for (const auto *d : data) {
        const std::string name = ci.id + "_" + d->name;
        claim_name(name, "data instance " + d->path);
        const std::string t = types_.text_of(d->classifier);
        h += "inline " + t + " &" + name + "(int instance) {\n";
        h += "  static " + t + " slots[" + std::to_string(ci.instances.size()) + "];\n";
        h += "  return slots[instance];\n}\n";
      }
      h += "\n";
    }
    std::set<std::string> procs;
    for (const auto *inst : ci.instances)
      for (const auto *p : children_of_kind(*inst, ComponentKind::process))
        procs.insert(p->classifier.type_name());
    std::string entries;
    for (const auto *p : children_of_kind(first, ComponentKind::process))
      if (procs.erase(p->classifier.type_name()))
        entries += "void Fun_" + p->classifier.type_name() + "();\n";
    for (const auto &id : procs)
      entries += "void Fun_" + id + "();\n";
    if (!entries.empty())
      h += "// Process entries\n" + entries + "\n";
    claim_name("Comm_" + ci.id, "communication step");
    h += "// Communication step\ninline void Comm_" + ci.id + "() {\n" + comm_body(ci) + "}\n";
    h += guard_close(ci.id);
    tree.add(header_path(ci), std::move(h));
  }

  std::string data_decls(const ClassInfo &ci, const ComponentInstance &first, bool definition) {
    std::string out;
    for (const auto *d : children_of_kind(first, ComponentKind::data)) {
      const std::string name = ci.id + "_" + d->name;
      if (!definition)
        claim_name(name, "data instance " + d->path);
      out += std::string(definition ? "" : "extern ") + types_.text_of(d->classifier) + " " + name + "[" +
             std::to_string(ci.instances.size()) + "];\n";
    }
    return out;
  }

  struct Param {
    std::string name;
    std::string type;
    bool out = false;
  };

  std::vector<Param> params_of(const ComponentInstance &sp) {
    std::vector<Param> ps;
    for (const auto &f : sp.features) {
      if (f.decl->variant != FeatureVariant::parameter)
        continue;
      ps.push_back({f.name, types_.port_type(f), f.decl->is_outgoing()});
    }
    return ps;
  }

  std::string signature(const std::string &fname, const std::vector<Param> &ps) const {
    std::string s = "void " + fname + "(";
    for (std::size_t i = 0; i < ps.size(); ++i)
      s += (i ? ", " : "") + (ps[i].out ? ps[i].type + " &" : "const " + ps[i].type + " &") + ps[i].name;
    return s + ")";
  }

  std::string subprogram_decls(const ClassInfo &ci, const ComponentInstance &first) {
    std::string out;
    for (const auto *sp : children_of_kind(first, ComponentKind::subprogram)) {
      const std::string fname = ci.id + "_" + sp->name;
      claim_name(fname, "subprogram " + sp->path);
      out += signature(fname, params_of(*sp)) + ";\n";
    }
    return out;
  }

  std::string subprogram_defs(const ClassInfo &ci, const ComponentInstance &first) {
    std::string out;
    for (const auto *sp : children_of_kind(first, ComponentKind::subprogram)) {
      auto ps = params_of(*sp);
      out += "\n" + signature(ci.id + "_" + sp->name, ps) + " {\n";
      for (const auto &p : ps)
        out += "  (void)" + p.name + ";\n";
      out += "}\n";
    }
    return out;
  }

  void gen_process(const ClassInfo &ci, FileTree &tree) {
    register_ports(ci);
    const ComponentInstance &first = *ci.instances.front();
    claim_name("Fun_" + ci.id, "process entry");
    claim_name("Comm_" + ci.id, "communication step");

    std::string h = guard_open(ci.id);
    h += include_of(ci, info_of(*first.parent)) + "\n";
    h += "void Fun_" + ci.id + "();\nvoid Comm_" + ci.id + "();\n";
    if (auto d = data_decls(ci, first, false); !d.empty())
      h += "\n" + d;
    if (auto s = subprogram_decls(ci, first); !s.empty())
      h += "\n" + s;
    h += guard_close(ci.id);
    tree.add(header_path(ci), std::move(h));

    std::string c = "#include \"" + ci.id + ".hpp\"\n";
    std::vector<std::string> thread_ids;
    for (const auto *inst : ci.instances)
      for (const auto *t : children_of_kind(*inst, ComponentKind::thread))
        if (std::find(thread_ids.begin(), thread_ids.end(), t->classifier.type_name()) == thread_ids.end())
          thread_ids.push_back(t->classifier.type_name());
    if (!thread_ids.empty()) {
      c += "\n";
      for (const auto &id : thread_ids)
        c += include_of(ci, classes_.at(id));
    }
    if (auto d = data_decls(ci, first, true); !d.empty())
      c += "\n" + d;

    std::string statuses, registrations;
    for (const auto *inst : ci.instances)
      for (const auto *t : children_of_kind(*inst, ComponentKind::thread)) {
        claim_name(status_name(*t), "task status");
        statuses += "static TaskStatus " + status_name(*t) + ";\n";
        registrations += "  CreatePeriodicTask(\"" + relative_path(*t) + "\", " + entry_point(*t) + ", " +
                         period_of(*t) + ", &" + status_name(*t) + ");";
        if (auto pr = lookup_property(*t, "Priority"); pr && pr->as_int())
          registrations += " // priority " + std::to_string(pr->as_int()->value);
        registrations += "\n";
      }
    if (!statuses.empty())
      c += "\n" + statuses;
    c += "\nvoid Comm_" + ci.id + "() {\n" + comm_body(ci) + "}\n";
    c += "\nvoid Fun_" + ci.id + "() {\n" + registrations + "}\n";
    c += subprogram_defs(ci, first);
    tree.add(source_path(ci), std::move(c));
  }

  void gen_thread(const ClassInfo &ci, FileTree &tree) {
    register_ports(ci);
    const ComponentInstance &first = *ci.instances.front();
    claim_name("Fun_" + ci.id, "thread entry");
    for (const auto *inst : ci.instances) {
      period_of(*inst);
      claim_name(entry_point(*inst), "task entry");
    }

    std::string h = guard_open(ci.id);
    h += include_of(ci, info_of(*first.parent)) + "\n";
    h += "void Fun_" + ci.id + "();\n";
    for (const auto *inst : ci.instances)
      h += "void " + entry_point(*inst) + "();\n";
    if (auto d = data_decls(ci, first, false); !d.empty())
      h += "\n" + d;
    if (auto s = subprogram_decls(ci, first); !s.empty())
      h += "\n" + s;
    h += guard_close(ci.id);
    tree.add(header_path(ci), std::move(h));

    std::string c = "#include \"" + ci.id + ".hpp\"\n";
    if (auto d = data_decls(ci, first, true); !d.empty())
      c += "\n" + d;
    c += "\nstatic int current_instance = 0;\n";
    c += subprogram_defs(ci, first);

    // Entry: copy in-ports, run subprograms in declaration order, publish out-ports.
    std::string body = "  " + ci.id + "_Ports &ports = " + ci.id + "_ports(current_instance);\n";
    std::map<std::string, std::string> locals;
    std::vector<const FeatureInstance *> outs;
    for (const auto &f : first.features) {
      if (!is_port(f))
        continue;
      const std::string t = types_.port_type(f);
      if (f.decl->is_outgoing()) {
        body += "  " + t + " " + f.name + " = ports." + f.name + ";\n";
        outs.push_back(&f);
      } else {
        body += "  const " + t + " " + f.name + " = ports." + f.name + ";\n";
      }
      locals[f.name] = t;
    }
    for (const auto *sp : children_of_kind(first, ComponentKind::subprogram)) {
      auto ps = params_of(*sp);
      std::string call = "  " + ci.id + "_" + sp->name + "(";
      for (std::size_t i = 0; i < ps.size(); ++i) {
        std::string arg = ps[i].name;
        auto it = locals.find(arg);
        if (it == locals.end() || it->second != ps[i].type ||
            (ps[i].out && std::none_of(outs.begin(), outs.end(), [&](const FeatureInstance *o) { return o->name == arg; }))) {
          arg = sp->name + "_" + ps[i].name;
          body += "  " + ps[i].type + " " + arg + " = " + ps[i].type + "();\n";
        }
        call += (i ? ", " : "") + arg;
      }
      body += call + ");\n";
    }
    for (const auto &[name, t] : locals)
      if (std::none_of(outs.begin(), outs.end(), [&](const FeatureInstance *o) { return o->name == name; }))
        body += "  (void)" + name + ";\n";
    for (const auto *o : outs)
      body += "  ports." + o->name + " = " + o->name + ";\n";
    c += "\nvoid Fun_" + ci.id + "() {\n" + body + "}\n";
    for (const auto *inst : ci.instances)
      c += "\nvoid " + entry_point(*inst) + "() {\n  current_instance = " + std::to_string(index_.at(inst)) +
           ";\n  Fun_" + ci.id + "();\n}\n";
    tree.add(source_path(ci), std::move(c));
  }

  const InstanceModel &model_;
  const ComponentInstance &root_;
  const CodegenOptions &options_;
  TypeTable types_;
  std::map<std::string, ClassInfo> classes_;
  std::vector<std::string> order_;
  std::map<const ComponentInstance *, int> index_;
  std::set<std::string> names_;
  std::string port_storage_;
};

} // namespace

std::string mapped_type(const PackageSet &packages, const ResolvedClassifier &data, const CodegenOptions &options) {
  TypeTable t(packages, options);
  return t.text_of(data);
}

FileTree generate(const InstanceModel &model, std::string_view root_path, const CodegenOptions &options) {
  const auto *root = model.component(root_path);
  if (!root)
    throw Error("NotFound", "no component instance '" + std::string(root_path) + "'");
  if (root->kind != ComponentKind::system)
    throw Error("NotASystemInstance", "'" + std::string(root_path) + "' is a " + std::string(to_string(root->kind)));
  return Generator(model, *root, options).run();
}

namespace {

namespace fs = std::filesystem;

std::optional<std::string> read_file(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  if (!in)
    return std::nullopt;
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_atomic(const fs::path &p, const std::string &content) {
  std::error_code ec;
  fs::create_directories(p.parent_path(), ec);
  if (ec)
    throw Error("IoError", "cannot create " + p.parent_path().string() + ": " + ec.message());
  fs::path tmp = p;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out || !(out << content) || !out.flush())
      throw Error("IoError", "cannot write " + tmp.string());
  }
  fs::rename(tmp, p, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error("IoError", "cannot replace " + p.string());
  }
}

} // namespace

WriteSummary write_tree(const FileTree &tree, const std::string &out_dir) {
  const fs::path root(out_dir);
  const fs::path manifest = root / std::string(kManifestName);
  std::set<std::string> managed;
  if (auto text = read_file(manifest)) {
    try {
      const auto j = nlohmann::json::parse(*text);
      for (const auto &f : j.at("files"))
        managed.insert(f.get<std::string>());
    } catch (const nlohmann::json::exception &e) {
      throw Error("IoError", "unreadable manifest " + manifest.string() + ": " + e.what());
    }
  }

  for (const auto &e : tree.entries) {
    auto existing = read_file(root / e.path);
    if (existing && *existing != e.content && !managed.count(e.path))
      throw Error("IoError", "refusing to overwrite " + (root / e.path).string() + ", not generated by uasforge");
  }

  WriteSummary summary;
  std::set<std::string> now;
  for (const auto &e : tree.entries) {
    now.insert(e.path);
    auto existing = read_file(root / e.path);
    if (existing && *existing == e.content) {
      summary.unchanged.push_back(e.path);
      continue;
    }
    write_atomic(root / e.path, e.content);
    summary.written.push_back(e.path);
  }
  for (const auto &old : managed) {
    if (now.count(old))
      continue;
    std::error_code ec;
    if (fs::remove(root / old, ec))
      summary.removed.push_back(old);
    for (fs::path dir = (root / old).parent_path(); dir != root && fs::is_empty(dir, ec) && !ec;
         dir = dir.parent_path())
      fs::remove(dir, ec);
  }
  nlohmann::json j;
  j["files"] = std::vector<std::string>(now.begin(), now.end());
  write_atomic(manifest, j.dump(2) + "\n");
  return summary;
}

} // namespace uasforge
