#include "poa/definitions.hpp"

#include <array>

namespace poa {

namespace {

const std::array<std::string, kPrincipleCount>& definition_texts() {
    static const std::array<std::string, kPrincipleCount> texts = {
        // balance
        "Balance is the distribution of visual weight in the composition. The objects being "
        "balanced can be visual elements or EoA. Balance brings a sense of equilibrium and "
        "stability to the composition by ensuring no one part overpowers another. Balance can be "
        "achieved through (1) symmetrical balance about an axis with both sides being identical "
        "or nearly identical, (2) asymmetrical balance about an axis with both sides comprising "
        "different elements but sharing similar visual weight, or (3) radial balance about a "
        "point with objects radiating outwards from or encircling around it. Unbalanced "
        "compositions can appear unfinished, unsettling and distract viewers from the intended "
        "messages. Overly-balanced compositions can appear predictable and monotonous, lacking "
        "dynamism and interest. Balance often works with harmony to create a cohesive and stable "
        "composition. It also works with contrast and emphasis when ensuring that focal points "
        "are highlighted without overwhelming the composition.",
        // harmony
        "Harmony is the state of cohesiveness in the composition where all parts contribute to "
        "the whole by appearing coordinated. Harmony brings a sense of order and cohesiveness, "
        "making the composition appear organised. It usually also brings about coherence and "
        "unity. It is achieved via the uniformity of different parts in the composition. "
        "Uniformity can come from a consistency in EoA employed or from other salient "
        "regularities such as analogous colour schemes. Insufficient harmony with excessive "
        "variety can make the composition appear uncoordinated and haphazard. Excessive harmony "
        "with insufficient variety and contrast can make the composition appear flat and "
        "predictable. Harmony is closely related to unity as cohesiveness often also elevates "
        "coherence in the composition. Harmony also relates to balance as cohesiveness and "
        "stability are closely intertwined. Harmony often opposes variety and therefore works "
        "with it in managing visual interest without introducing chaos.",
        // variety
        "Variety is the diversity and complexity of visual elements in the composition. Variety "
        "engages the viewer and holds their attention by creating regions of visual interest for "
        "exploration. It also brings excitement and dynamism to the composition. Variety can be "
        "achieved by varying either EoA employed or other visual attributes such as proportions "
        "and placements. Insufficient variety can make the composition appear monotonous and "
        "repetitive. Excessive variety may cause the composition to appear chaotic with too many "
        "elements fighting for attention. Variety can oppose harmony so the two work closely to "
        "ensure that the composition is interesting yet cohesive. Variety also contributes "
        "towards contrast and emphasis when differences are highlighted.",
        // unity
        "Unity is the state of coherence or oneness, where all elements fit into the composition "
        "without appearing forced or out-of-place. Unity brings coherence to the composition by "
        "presenting elements which align well with one's expectations (e.g. a fruits basket "
        "containing only fruits). It also brings a sense of completeness when most of what's "
        "expected is present (e.g. a round table with chairs around it). By intentionally "
        "leaving out an expected element, unity can also be manipulated to highlight the absence "
        "of it (e.g. a family portrait without a father figure). Unity can be achieved when "
        "different parts of the composition adhere to a clear context, theme or message. The "
        "adherence can come from a consistency in EoA employed, a repetition of visual elements, "
        "a unified colour scheme, a recurring motif or simply semantic relevance. Insufficient "
        "unity can make the composition appear confusing, disjoint, and fragmented with "
        "superfluous parts. Excessive unity and harmony can suppress variety, create monotony "
        "and appear too predictable, lowering visual engagement. Unity is often enhanced by "
        "harmony and the two are closely related. Unity can also be realised through balance, "
        "proportion and rhythm. An element that is not unified with the composition stands out "
        "and can therefore bring emphasis to itself.",
        // contrast
        "Contrast is the use of opposing visual elements in the composition. Contrast brings "
        "drama, excitement and focus to the composition, highlighting differences and drawing "
        "attention to important areas. Contrast can be achieved through the use of contrasting "
        "EoA and the juxtapositions of opposing visual elements. Insufficient contrast can make "
        "the composition appear flat, lacking focus points and leaving little visual impression. "
        "Excessive contrast can make the composition appear jarring, disjointed and overwhelming. "
        "Contrast is often employed for emphasis and they work with balance to ensure that focal "
        "points are highlighted without overpowering the composition. Contrast is usually "
        "directly correlated with variety. Contrast can also create movement by guiding the eyes "
        "across the composition.",
        // emphasis
        "Emphasis is the presence of focal points within the composition which draw attention to "
        "its important parts. Emphasis helps communicate the intended message effectively by "
        "bringing focus and interest to the main subjects and prominent areas in the "
        "composition. These areas tend to be the first (and perhaps also the last) regions to be "
        "gazed at. Emphasis can be created via stark contrasts, placement in prominent positions "
        "(e.g. centre or foreground), converging lines, isolation from other visual elements, "
        "exaggerated proportions and the use of variety to highlight specific areas. "
        "Insufficient emphasis can make the composition appear monotonous and directionless, "
        "with no clear regions of interest. Excessive emphasis can create too many focal points, "
        "leading to confusion and a lack of clear focus. Emphasis often works with contrast to "
        "highlight important areas. It also works with balance when focal points are emphasised "
        "without overwhelming the composition. With multiple regions of emphasis, movement is "
        "also created by guiding the eyes across the composition.",
        // proportion
        "Proportion is the sense of scale and depth from the relative sizes between visual "
        "elements in the composition. Proportion influences viewers' perception and "
        "interpretation by manipulating depth and perspective in the composition. Relative sizes "
        "between visual elements can describe their relationship and importance. The presence of "
        "specific ratios and principles (e.g. the golden ratio) can also enhance aesthetics. "
        "Proportion can be achieved by carefully considering the size and scale of visual "
        "elements. For example, related visual elements can possess similar sizes while "
        "important elements can overpower surrounding elements in terms of scale. Realistic "
        "proportions help achieve realism while exaggerated and distorted proportions can be "
        "employed for artistic effect. Insufficient proportion can damage balance and harmony, "
        "make the composition appear too unrealistic or create excessive visual distortion and "
        "confuse viewers. Excessive proportion can lead to a lack of variety and interest, "
        "making the composition appear repetitive. Proportion often works with balance to ensure "
        "visual elements are balanced by their sizes. Consistent and appropriate sizing of "
        "visual elements also ensure a cohesive and coherent composition, contributing to "
        "harmony and unity. Proportion also creates emphasis by highlighting specific areas "
        "through size and scale.",
        // movement
        "Movement is the appearance or suggestion of motions within the composition. Movement "
        "facilitates visual narration by guiding the eyes in the composition. It adds dynamism "
        "and flow to a still composition, making it appear alive and engaging. It can also "
        "create tension via the anticipation of unfolding events in the scene. Movement can be "
        "created by the repetition of EoA suggesting directions or rhythmic motions (e.g. "
        "diagonal/converging lines, swirling curves), implied by the arrangement of elements "
        "depicting motion and direction (e.g. objects falling off an edge), or introduced by "
        "scenes that lead the gaze (e.g. a flowing river, human traffic). It can also be "
        "achieved by some optical illusions. Insufficient movement can make the composition "
        "appear static, lifeless, and unengaging. Excessive movement can create chaos and "
        "confusion, distracting viewers from important aspects. Movement often works with rhythm "
        "and pattern when creating a smooth, rhythmic and continuous sense of flow. Contrast and "
        "emphasis can work with movement to create sequential navigational points for the eyes "
        "(e.g. The Scream by Edvard Munch).",
        // rhythm
        "Rhythm is the presence of visual tempo in the composition. Rhythm adds a sense of "
        "continuity, flow and dynamism to the composition. It can also help blend and connect "
        "distinct parts together in a cohesive manner (e.g. trees connected via bushes). Visual "
        "tempo can be manipulated to evoke either calmness (e.g. grass on a windy field) or "
        "excitement (e.g. crashing waves). Rhythm is achieved by the continuous repetition, "
        "sequential progression (e.g. gradual increment) or alternation (e.g. varying the "
        "spacing or arrangement at intervals) of EoA or visual elements. Insufficient rhythm can "
        "make the composition appear sparse and static. Excessive rhythm can make the "
        "composition appear repetitive and monotonous. Rhythm introduces movement through flow, "
        "and variety through visual tempo. It also elevates harmony and unity when it blends "
        "different visual elements together cohesively and coherently.",
        // pattern
        "Pattern is the repetition of elements in a consistent and organised manner within the "
        "composition. Patterns are often decorative and add texture and visual appeal to the "
        "composition, increasing its visual engagement. Their repetitive nature can bring a "
        "sense of predictability, order and structure to the composition. Pattern also creates a "
        "discrete sense of movement and flow. Pattern is sometimes used to create emphasis via "
        "the strategic placement of irregularities. Patterns can be simple through the "
        "consistent repetition of EoA or complex by combining and arranging elements (e.g. "
        "motifs or designs) in a regular and consistent manner. Insufficient pattern can make "
        "the composition appear chaotic and disorganised. Excessive pattern can introduce "
        "rigidity and predictability, making the composition appear static and monotonous. "
        "Pattern is more rigid than rhythm but they are closely related as their techniques "
        "overlap. Pattern directly relates to variety, with more complex patterns corresponding "
        "to higher variety. It also relates to harmony and unity when arranging elements in a "
        "cohesive and coherent manner. Patterns are often themselves balanced by construction.",
    };
    return texts;
}

}  // namespace

const std::string& principle_definition(Principle p) {
    return definition_texts()[static_cast<size_t>(p)];
}

const std::string& poa_definitions_block() {
    static const std::string block = [] {
        std::string out =
            "The Principles of Art (PoA) is a set of guidelines for composing artworks. The "
            "elements used for composition are known as the elements of art (EoA), which "
            "generally comprise line, shape, texture, form, space, colour and value. The PoA can "
            "be used in any number of ways to achieve visual storytelling: arousing interest, "
            "evoking feelings or conveying certain ideas to viewers. It also provides viewers "
            "with a framework to analyse, appreciate and reason about artworks from a "
            "compositional perspective. PoA are not mutually exclusive to one another as they "
            "are intricately related concepts. We shall define each PoA in the following 10 "
            "paragraphs.\n";
        int i = 1;
        for (Principle p : canonical_principle_order()) {
            out += "\n" + std::to_string(i++) + ". " + principle_definition(p);
        }
        return out;
    }();
    return block;
}

}  // namespace poa
