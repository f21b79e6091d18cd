#pragma once

#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace cdmrg {

/// Finite group given by its multiplication table; elements are 0..order-1.
struct GroupData {
    std::string                  name;
    int                          order    = 0;
    int                          identity = 0;
    std::vector<int>             mul;     // mul[a * order + b] = a·b
    std::vector<int>             inverse;
    std::vector<Eigen::Matrix3d> rotation; // SO(3) image of each element, empty when not a rotation group
    std::vector<std::string>     element_names;

    [[nodiscard]] int  product(int a, int b) const { return mul[static_cast<size_t>(a * order + b)]; }
    [[nodiscard]] bool has_rotations() const { return !rotation.empty(); }
};
using GroupPtr = std::shared_ptr<const GroupData>;

/// Builds a group from a table, filling identity and inverses. Throws on a table that is not a group.
GroupData make_group(std::string name, int order, std::vector<int> mul, std::vector<Eigen::Matrix3d> rotation = {},
                     std::vector<std::string> element_names = {});

/// Exhaustive closure, identity, inverse and associativity check.
void validate_group(const GroupData &g);

/// Alternating group on the four vertices of a tetrahedron, realized as rotations of the cube axes.
GroupPtr build_a4();

int                           element_order(const GroupData &g, int x);
std::vector<std::vector<int>> conjugacy_classes(const GroupData &g);

/// The rotation cycling x -> y -> z; used to fix irrep labels.
int a4_axis_cycle(const GroupData &a4);

struct SubgroupEmbedding {
    GroupPtr         sub;
    GroupPtr         parent;
    std::vector<int> map; // sub element -> parent element

    [[nodiscard]] int operator()(int h) const { return map[static_cast<size_t>(h)]; }
};

SubgroupEmbedding identity_embedding(const GroupPtr &g);
SubgroupEmbedding subgroup_from_elements(const GroupPtr &parent, std::vector<int> elements);
double            homomorphism_residual(const SubgroupEmbedding &emb);

/// One representative per conjugacy class of subgroups, ordered by order then by sorted element list.
std::vector<SubgroupEmbedding> enumerate_subgroups(const GroupPtr &parent);

/// Subgroup representative with the given structural name ("1", "Z2", "Z3", "D2", "A4").
SubgroupEmbedding find_subgroup(const GroupPtr &parent, const std::string &name);

}
