#include "neurogate/planner/ground.hpp"

#include <algorithm>
#include <stdexcept>

#include "neurogate/core/hash.hpp"

namespace neurogate::planner {

WorldState WorldState::from_atoms(std::vector<std::uint32_t> atoms) {
  std::sort(atoms.begin(), atoms.end());
  atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
  WorldState s;
  s.atoms_ = std::move(atoms);
  return s;
}

bool WorldState::contains(std::uint32_t id) const {
  return std::binary_search(atoms_.begin(), atoms_.end(), id);
}

bool WorldState::contains_all(std::span<const std::uint32_t> ids) const {
  return std::all_of(ids.begin(), ids.end(), [&](std::uint32_t id) { return contains(id); });
}

WorldState WorldState::apply(std::span<const std::uint32_t> adds,
                             std::span<const std::uint32_t> dels) const {
  std::vector<std::uint32_t> next;
  next.reserve(atoms_.size() + adds.size());
  for (std::uint32_t id : atoms_)
    if (!std::binary_search(dels.begin(), dels.end(), id)) next.push_back(id);
  for (std::uint32_t id : adds) next.push_back(id);
  return from_atoms(std::move(next));
}

std::uint64_t WorldState::fingerprint() const {
  return core::fnv1a64(atoms_.data(), atoms_.size() * sizeof(std::uint32_t));
}

GroundModel::GroundModel(DomainDef domain, std::vector<std::pair<std::string, std::string>> objects)
    : domain_(std::move(domain)), objects_(std::move(objects)) {
  for (const auto& [name, type] : objects_) {
    if (type != "object") {
      bool known = false;
      for (const auto& td : domain_.types)
        if (td.name == type) { known = true; break; }
      if (!known)
        throw std::invalid_argument("object '" + name + "' has unknown type '" + type + "'");
    }
    if (!object_type_.emplace(name, type).second)
      throw std::invalid_argument("duplicate object '" + name + "'");
  }

  // Ground every action schema over the typed object sets, then order the
  // table lexicographically so search is deterministic.
  const bool have_reachable = domain_.find_predicate("reachable") != nullptr;
  std::vector<std::string> safe_args;
  const bool have_safe = domain_.find_predicate("safe-configuration") != nullptr;

  struct Pending {
    std::string schema_name;
    std::uint32_t schema;
    std::vector<std::string> args;
  };
  std::vector<Pending> pending;

  for (std::uint32_t ai = 0; ai < domain_.actions.size(); ++ai) {
    const ActionDef& schema = domain_.actions[ai];
    std::vector<std::vector<std::string>> pools;
    pools.reserve(schema.param_names.size());
    for (const auto& t : schema.param_types) pools.push_back(objects_of_type(t));

    std::vector<std::size_t> idx(pools.size(), 0);
    const bool empty_pool = std::any_of(pools.begin(), pools.end(),
                                        [](const auto& p) { return p.empty(); });
    if (empty_pool && !pools.empty()) continue;

    for (;;) {
      Pending p;
      p.schema_name = schema.name;
      p.schema = ai;
      for (std::size_t k = 0; k < pools.size(); ++k) p.args.push_back(pools[k][idx[k]]);
      pending.push_back(std::move(p));

      std::size_t k = pools.size();
      while (k > 0) {
        --k;
        if (++idx[k] < pools[k].size()) break;
        idx[k] = 0;
        if (k == 0) { k = SIZE_MAX; break; }
      }
      if (pools.empty() || k == SIZE_MAX) break;
    }
  }

  std::sort(pending.begin(), pending.end(), [](const Pending& a, const Pending& b) {
    if (a.schema_name != b.schema_name) return a.schema_name < b.schema_name;
    return a.args < b.args;
  });

  for (const auto& p : pending) {
    const ActionDef& schema = domain_.actions[p.schema];
    GroundAction ga;
    ga.id = std::uint32_t(actions_.size());
    ga.schema = p.schema;
    ga.args = p.args;
    ga.name = "(" + schema.name;
    for (const auto& a : p.args) ga.name += " " + a;
    ga.name += ")";

    const auto bind = [&](const Literal& lit) {
      std::vector<std::string> args;
      args.reserve(lit.args.size());
      for (const auto& v : lit.args) {
        const auto it = std::find(schema.param_names.begin(), schema.param_names.end(), v);
        args.push_back(p.args[std::size_t(it - schema.param_names.begin())]);
      }
      return atom_id(lit.predicate, args);
    };

    for (const auto& l : schema.preconditions) ga.preconditions.push_back(bind(l));
    for (const auto& l : schema.add_effects) ga.adds.push_back(bind(l));
    for (const auto& l : schema.del_effects) ga.deletes.push_back(bind(l));

    if (have_reachable) {
      for (std::size_t k = 0; k < schema.param_types.size(); ++k) {
        if (domain_.type_derives(schema.param_types[k], "location")) {
          std::vector<std::string> one{p.args[k]};
          ga.reachable_required.push_back(atom_id("reachable", one));
        }
      }
      std::sort(ga.reachable_required.begin(), ga.reachable_required.end());
      ga.reachable_required.erase(
          std::unique(ga.reachable_required.begin(), ga.reachable_required.end()),
          ga.reachable_required.end());
    }
    std::sort(ga.preconditions.begin(), ga.preconditions.end());
    std::sort(ga.adds.begin(), ga.adds.end());
    std::sort(ga.deletes.begin(), ga.deletes.end());

    if (have_safe) {
      const auto safe_id = find_atom("safe-configuration", safe_args);
      if (safe_id)
        ga.needs_safe_configuration =
            std::binary_search(ga.preconditions.begin(), ga.preconditions.end(), *safe_id);
    }

    actions_.push_back(std::move(ga));
  }
}

std::string GroundModel::atom_key(std::string_view predicate,
                                  std::span<const std::string> args) const {
  std::string key(predicate);
  for (const auto& a : args) {
    key += ' ';
    key += a;
  }
  return key;
}

std::uint32_t GroundModel::atom_id(std::string_view predicate, std::span<const std::string> args) {
  const PredicateDef* pd = domain_.find_predicate(predicate);
  if (!pd) throw std::invalid_argument("unknown predicate '" + std::string(predicate) + "'");
  if (pd->arity() != args.size())
    throw std::invalid_argument("predicate '" + pd->name + "' takes " +
                                std::to_string(pd->arity()) + " arguments");
  for (std::size_t i = 0; i < args.size(); ++i) {
    const auto it = object_type_.find(args[i]);
    if (it == object_type_.end())
      throw std::invalid_argument("unknown object '" + args[i] + "'");
    if (!domain_.type_derives(it->second, pd->param_types[i]))
      throw std::invalid_argument("object '" + args[i] + "' of type '" + it->second +
                                  "' does not fit parameter " + std::to_string(i + 1) + " of '" +
                                  pd->name + "'");
  }

  const std::string key = atom_key(predicate, args);
  const auto it = atom_ids_.find(key);
  if (it != atom_ids_.end()) return it->second;
  const auto id = std::uint32_t(atom_names_.size());
  std::string name = "(" + std::string(predicate);
  for (const auto& a : args) name += " " + a;
  name += ")";
  atom_names_.push_back(std::move(name));
  atom_ids_.emplace(key, id);
  return id;
}

std::optional<std::uint32_t> GroundModel::find_atom(std::string_view predicate,
                                                    std::span<const std::string> args) const {
  const auto it = atom_ids_.find(atom_key(predicate, args));
  if (it == atom_ids_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> GroundModel::objects_of_type(std::string_view type) const {
  std::vector<std::string> out;
  for (const auto& [name, t] : objects_)
    if (domain_.type_derives(t, type)) out.push_back(name);
  return out;
}

WorldState GroundModel::state_from_literals(std::span<const Literal> lits) {
  std::vector<std::uint32_t> atoms;
  atoms.reserve(lits.size());
  for (const auto& l : lits) atoms.push_back(atom_id(l.predicate, l.args));
  return WorldState::from_atoms(std::move(atoms));
}

std::vector<std::string> GroundModel::state_issues(const WorldState& s) const {
  std::vector<std::string> issues;
  // Group by predicate + first argument for the uniqueness conventions and
  // catch holding/empty-handed conflicts per robot.
  std::unordered_map<std::string, int> at_count, oriented_count;
  std::unordered_map<std::string, bool> holding, empty_handed;
  for (std::uint32_t id : s.atoms()) {
    const std::string& name = atom_names_[id];
    // name looks like "(pred a b)"
    const auto sp = name.find(' ');
    const std::string pred = sp == std::string::npos ? name.substr(1, name.size() - 2)
                                                     : name.substr(1, sp - 1);
    std::string first;
    if (sp != std::string::npos) {
      const auto e = name.find_first_of(" )", sp + 1);
      first = name.substr(sp + 1, e - sp - 1);
    }
    if (pred == "at") ++at_count[first];
    else if (pred == "oriented") ++oriented_count[first];
    else if (pred == "holding") holding[first] = true;
    else if (pred == "empty-handed") empty_handed[first] = true;
  }
  for (const auto& [r, n] : at_count)
    if (n > 1) issues.push_back("robot '" + r + "' is at " + std::to_string(n) + " locations");
  for (const auto& [r, n] : oriented_count)
    if (n > 1) issues.push_back("robot '" + r + "' has " + std::to_string(n) + " orientations");
  for (const auto& [r, h] : holding)
    if (h && empty_handed.count(r) && empty_handed[r])
      issues.push_back("robot '" + r + "' is both holding an item and empty-handed");
  return issues;
}

bool applicable(const WorldState& s, const GroundAction& a) {
  return s.contains_all(a.preconditions);
}

WorldState apply(const WorldState& s, const GroundAction& a) {
  return s.apply(a.adds, a.deletes);
}

}  // namespace neurogate::planner
