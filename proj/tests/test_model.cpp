#include "doctest.h"

#include "dmc/model.hpp"
#include "support/fixtures.hpp"
#include "support/random_models.hpp"

using namespace dmc;
using namespace dmc::testing;

TEST_CASE("resolve finds present elements and returns null for missing ones") {
    Model m;
    m.name = "M";
    m.elements.push_back(classifier(ElementKind::Class, "Researcher"));
    m = normalize(m);

    const Element* hit = resolve(m, "M::Researcher");
    REQUIRE(hit != nullptr);
    CHECK(hit->name == "Researcher");
    CHECK(resolve(m, "Researcher") == hit);
    CHECK(resolve(m, "M::Ghost") == nullptr);

    const Model empty;
    CHECK(resolve(empty, "anything") == nullptr);
}

TEST_CASE("element census follows the fixed counting rule") {
    CHECK(element_census(Model{}).total == 0);

    Model m;
    m.name = "M";
    Element c = classifier(ElementKind::Class, "C");
    c.attributes.push_back(attr("a", "int"));
    c.attributes.push_back(attr("b", "int"));
    c.operations.push_back(op("run", "void"));
    m.elements.push_back(std::move(c));
    m.elements.push_back(classifier(ElementKind::Class, "D"));
    m.relationships.push_back(rel(RelationshipKind::Dependency, "C", "D"));
    const Census census = element_census(normalize(m));
    CHECK(census.classes == 2);
    CHECK(census.attributes == 2);
    CHECK(census.operations == 1);
    CHECK(census.relationships == 1);
    CHECK(census.total == 6);
}

TEST_CASE("figure-1 delta census matches the hand count") {
    const Census census = element_census(figure1_delta());
    CHECK(census.classes == 3);
    CHECK(census.attributes == 1);
    CHECK(census.operations == 2);
    CHECK(census.relationships == 2);
    CHECK(census.total == 8);
}

TEST_CASE("normalization is idempotent and census matches the naive oracle") {
    Rng rng(42);
    for (int i = 0; i < 50; ++i) {
        const Model m = random_model(rng);
        CHECK(normalize(m) == normalize(normalize(m)));
        CHECK(element_census(m).total == naive_census_total(m));
    }
}

TEST_CASE("resolve is absent exactly for names not in the model") {
    Rng rng(7);
    for (int i = 0; i < 30; ++i) {
        const Model m = random_model(rng);
        for (const auto& e : m.elements) {
            CHECK(resolve(m, qualified_name(m, e)) != nullptr);
        }
        CHECK(resolve(m, "M::NotThere") == nullptr);
        CHECK(resolve(m, "NotThere") == nullptr);
    }
}

TEST_CASE("normalization orders elements canonically") {
    Model shuffled;
    shuffled.name = "M";
    shuffled.elements.push_back(classifier(ElementKind::Class, "Zeta"));
    shuffled.elements.push_back(classifier(ElementKind::Class, "Alpha"));
    Model sorted = normalize(shuffled);
    CHECK(sorted.elements[0].name == "Alpha");
    CHECK(sorted.elements[1].name == "Zeta");

    Model other;
    other.name = "M";
    other.elements.push_back(classifier(ElementKind::Class, "Alpha"));
    other.elements.push_back(classifier(ElementKind::Class, "Zeta"));
    CHECK(structurally_equal(shuffled, other));
}
