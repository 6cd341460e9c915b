#!/usr/bin/env python3
"""Writes data/sample_corpus.json, the small hand-authored corpus shipped with
the engine. Run from the repository root:

    python3 tools/author_sample_corpus.py [--out data/sample_corpus.json]
"""

import argparse
import json
import random

# name, category, description, neighbors, characters, objects
LOCATIONS = [
    # town
    ("Town of Anoria", "town",
     "A bustling town at the foot of the mountains. Merchants sell wares in the square and townspeople hurry between stone houses.",
     ["Mountain's Peak", "Town Square", "Town Gate"], ["townspeople", "mysterious merchant"], ["candle", "backpack"]),
    ("Town Square", "town",
     "The open heart of the town, paved with cobbles, where a fountain splashes and the town crier shouts the news.",
     ["Town of Anoria", "Market Street", "Village Chapel"], ["town crier", "street urchin"], ["wooden bench", "lantern"]),
    ("Market Street", "town",
     "A crowded street lined with market stalls selling apples, bread and cloth. Merchants haggle loudly with buyers.",
     ["Town Square", "Village Bakery", "Rusty Anvil Forge"], ["mysterious merchant", "farmer"], ["market stall", "apple", "pouch"]),
    ("Village Bakery", "town",
     "A warm bakery that smells of fresh bread. Flour dusts every surface and loaves cool by the window.",
     ["Market Street", "Town Square"], ["baker"], ["loaf of bread", "broom"]),
    ("Rusty Anvil Forge", "town",
     "A smoky forge where the blacksmith hammers glowing iron on a heavy anvil and cools blades in water.",
     ["Market Street", "Town Gate"], ["blacksmith"], ["anvil", "hammer", "wooden sword"]),
    ("Village Chapel", "town",
     "A quiet stone chapel with wooden pews. Candles flicker before a simple altar.",
     ["Town Square"], ["priest", "beggar"], ["candle", "wooden bench"]),
    ("Prancing Pony Tavern", "town",
     "A noisy tavern where travelers drink ale by the fire and trade rumors late into the night.",
     ["Town Square", "Town Gate"], ["tavern keeper", "washerwoman"], ["mug of ale", "wool cloak"]),
    ("Town Gate", "town",
     "A heavy wooden gate in the town wall, watched by a bored town guard who questions travelers.",
     ["Town of Anoria", "Mountain Pass", "Prancing Pony Tavern"], ["town guard"], ["lantern", "eyeglasses"]),
    # castle
    ("Throne Room", "castle",
     "A grand hall of the castle where the king sits upon a golden throne beneath royal banners.",
     ["Great Hall", "Royal Bedchamber", "Castle Armory"], ["king", "royal advisor"], ["golden crown", "royal scepter"]),
    ("Great Hall", "castle",
     "The castle's feasting hall with long banquet tables, roaring hearths and minstrels playing for the court.",
     ["Throne Room", "Castle Kitchen", "Castle Courtyard"], ["court jester", "queen"], ["banquet table", "goblet of wine", "roast boar"]),
    ("Castle Kitchen", "castle",
     "A hot castle kitchen where cooks stir great pots of stew and roast meat over the fire.",
     ["Great Hall", "Castle Dungeon"], ["castle cook", "chambermaid"], ["cooking pot", "bowl of stew"]),
    ("Castle Dungeon", "castle",
     "A damp dungeon beneath the castle. Prisoners rattle their iron shackles in the dark cells.",
     ["Castle Kitchen", "Castle Armory"], ["prisoner", "jailer"], ["iron shackles", "iron key", "torch"]),
    ("Castle Armory", "castle",
     "Racks of swords, spears and shields line the walls of the castle armory, polished for battle.",
     ["Throne Room", "Castle Dungeon", "Castle Courtyard"], ["knight", "squire"], ["steel longsword", "spear", "shield"]),
    ("Royal Bedchamber", "castle",
     "The king and queen's bedchamber, hung with rich tapestries, with a great chest at the foot of the bed.",
     ["Throne Room"], ["queen", "chambermaid"], ["tapestry", "treasure chest"]),
    ("Castle Courtyard", "castle",
     "An open courtyard inside the castle walls where knights train and squires groom horses.",
     ["Great Hall", "Castle Armory", "Castle Watchtower"], ["knight", "royal guard"], ["chainmail", "torch"]),
    ("Castle Watchtower", "castle",
     "A tall tower on the castle wall where archers keep watch over the lands beyond.",
     ["Castle Courtyard", "Pine Forest"], ["royal archer", "royal guard"], ["spear", "shield"]),
    # mountain and forest
    ("Mountain's Peak", "forest",
     "The snowy summit of the mountain, where eagles circle and the wind howls over the rocks.",
     ["Town of Anoria", "Mountain Pass", "Bear Cave"], ["mountain hermit", "eagle"], ["walking staff", "fur cloak"]),
    ("Mountain Pass", "forest",
     "A narrow rocky pass through the mountains, used by shepherds and goat herders moving their flocks.",
     ["Mountain's Peak", "Town Gate", "Pine Forest"], ["shepherd", "goat herder"], ["rope", "water skin"]),
    ("Pine Forest", "forest",
     "A dark forest of tall pines. Hunters and woodcutters follow deer trails between the trees.",
     ["Mountain Pass", "Hunter's Cabin", "Forest Clearing", "Castle Watchtower"], ["hunter", "woodcutter"], ["pine cone", "woodcutter's axe"]),
    ("Hunter's Cabin", "forest",
     "A small log cabin in the forest, hung with bear pelts and deer antlers from the hunter's trophies.",
     ["Pine Forest", "Forest Clearing"], ["hunter"], ["hunting bow", "bear pelt", "deer antlers", "hunter's satchel"]),
    ("Forest Clearing", "forest",
     "A sunny clearing in the forest where wild berries grow and a druid tends a ring of stones.",
     ["Pine Forest", "Hunter's Cabin", "Old Oak Grove"], ["druid", "wandering bard"], ["wild berries", "tree stump", "campfire"]),
    ("Bear Cave", "forest",
     "A deep cave in the mountain side, smelling of bear, littered with bones and honeycomb.",
     ["Mountain's Peak", "Forest Waterfall"], ["bear"], ["honeycomb", "sack of grain"]),
    ("Forest Waterfall", "forest",
     "A waterfall tumbling into a cold forest pool, where wolves come to drink at dusk.",
     ["Bear Cave", "Old Oak Grove"], ["wolf", "lost traveler"], ["water skin", "leather boots"]),
    ("Old Oak Grove", "forest",
     "An ancient grove of oak trees deep in the forest, sacred to the druid and forest ranger.",
     ["Forest Clearing", "Forest Waterfall"], ["forest ranger", "druid"], ["walking staff", "wild berries"]),
    # coast
    ("Fishing Dock", "shore",
     "A wooden dock on the harbor where fishermen mend nets and unload buckets of fish from their boats.",
     ["Harbor Market", "Fisherman's Hut", "Lighthouse"], ["fisherman", "dock worker"], ["fishing net", "bucket of fish", "fishing rod"]),
    ("Lighthouse", "shore",
     "A tall white lighthouse on the rocks, its great lamp warning sailors away from the reef.",
     ["Fishing Dock", "Sea Cliffs"], ["lighthouse keeper"], ["telescope", "oar"]),
    ("Sandy Beach", "shore",
     "A long sandy beach scattered with sea shells, where crabs scuttle and seagulls cry.",
     ["Fisherman's Hut", "Shipwreck Cove"], ["crab", "seagull"], ["sea shell", "lobster trap"]),
    ("Harbor Market", "shore",
     "A noisy harbor market where fishmongers sell salted herring and sailors buy rum.",
     ["Fishing Dock", "Shipwreck Cove"], ["fishmonger", "harbor master"], ["salted herring", "barrel of rum"]),
    ("Shipwreck Cove", "shore",
     "A hidden cove where the broken hull of a pirate ship rots on the sand.",
     ["Sandy Beach", "Harbor Market", "Smuggler's Cave"], ["pirate captain", "sailor"], ["anchor", "cutlass", "treasure map"]),
    ("Fisherman's Hut", "shore",
     "A small hut by the sea where a fisherman smokes fish and mends his fishing rod.",
     ["Fishing Dock", "Sandy Beach"], ["fisherman", "ship's cook"], ["raw fish", "fishing rod"]),
    ("Sea Cliffs", "shore",
     "High cliffs above the crashing sea, where seagulls nest and the wind tastes of salt.",
     ["Lighthouse", "Smuggler's Cave"], ["seagull", "mermaid"], ["rope", "sea shell"]),
    ("Smuggler's Cave", "shore",
     "A damp sea cave where smugglers hide barrels of rum and stolen treasure from the harbor master.",
     ["Shipwreck Cove", "Sea Cliffs"], ["smuggler", "pirate captain"], ["barrel of rum", "pirate hat"]),
    # magic
    ("Wizard's Tower", "magic",
     "A crooked stone tower where the wizard studies spells. Stairs spiral up past shelves of books and strange magic.",
     ["Wizard's Reagent Room", "Library of Scrolls", "Observatory"], ["wizard", "apprentice"], ["spellbook", "wizard's staff", "pointed hat"]),
    ("Wizard's Reagent Room", "magic",
     "A cramped room in the wizard's tower, where the wizard keeps jars of reagents, dried herbs and eye of newt on a reagent shelf.",
     ["Wizard's Tower", "Alchemy Laboratory"], ["apprentice", "familiar cat"], ["reagent shelf", "dried herbs", "eye of newt", "glass vial"]),
    ("Alchemy Laboratory", "magic",
     "A laboratory full of bubbling cauldrons and glass vials, where the alchemist brews potions.",
     ["Wizard's Reagent Room", "Enchanted Garden"], ["alchemist"], ["bubbling cauldron", "potion of healing", "mortar and pestle"]),
    ("Library of Scrolls", "magic",
     "A vast magic library of dusty scrolls and spellbooks, kept in silence by an old librarian.",
     ["Wizard's Tower", "Observatory"], ["librarian"], ["scroll of fire", "spellbook"]),
    ("Observatory", "magic",
     "A domed room at the top of the tower where the astronomer charts the stars with a brass telescope.",
     ["Wizard's Tower", "Library of Scrolls"], ["astronomer"], ["star chart", "crystal ball"]),
    ("Enchanted Garden", "magic",
     "A magic garden where glowing flowers sing and the herbalist gathers rare herbs for potions.",
     ["Alchemy Laboratory", "Crystal Cavern"], ["herbalist", "enchantress"], ["dried herbs", "enchanted ring"]),
    ("Crystal Cavern", "magic",
     "A cavern of glowing crystals humming with magic, where miners chip at the walls.",
     ["Enchanted Garden", "Summoning Circle"], ["crystal miner", "golem"], ["crystal ball", "wand of sparks"]),
    ("Summoning Circle", "magic",
     "A ring of runes carved into the floor of a hidden chamber, where the summoner calls imps from beyond.",
     ["Crystal Cavern"], ["summoner", "imp"], ["silver robe", "scroll of fire"]),
]

# name, persona, description, carrying, wearing, wielding
CHARACTERS = [
    # town
    ("townspeople", "We are the ordinary folk of the town, busy with our trades.", "A crowd of townspeople going about their day.", ["pouch"], [], []),
    ("mysterious merchant", "I travel from town to town selling rare wares and asking few questions.", "A hooded merchant with a heavy pack and a sly smile.", ["backpack", "coins"], ["wool cloak"], []),
    ("blacksmith", "I forge tools and blades at my anvil from dawn to dusk.", "A broad blacksmith with soot on his arms.", [], [], ["hammer"]),
    ("baker", "I rise before dawn to bake bread for the whole town.", "A cheerful baker covered in flour.", ["loaf of bread"], [], []),
    ("town guard", "I keep the peace at the town gate and question strangers.", "A bored guard leaning on a spear.", [], [], ["wooden sword"]),
    ("priest", "I tend the chapel and pray for the souls of the town.", "A quiet priest in grey robes.", ["candle"], [], []),
    ("tavern keeper", "I pour ale and listen to every rumor in town.", "A stout tavern keeper wiping a mug.", ["mug of ale"], [], []),
    ("beggar", "I sit by the chapel door and ask for coins.", "A ragged beggar with a tin cup.", ["coins"], [], []),
    ("street urchin", "I run the streets picking pockets and carrying messages.", "A quick child in torn clothes.", ["apple"], [], []),
    ("town crier", "I shout the news of the kingdom in the town square.", "A loud man with a bell.", [], ["eyeglasses"], []),
    ("farmer", "I bring apples and grain to the market each week.", "A sunburned farmer with a cart.", ["apple"], [], []),
    ("washerwoman", "I wash the linens of the tavern and the town.", "A strong woman with red hands.", ["broom"], [], []),
    # castle
    ("king", "I rule this kingdom from my throne and demand loyalty.", "A proud king in royal robes.", [], ["golden crown"], ["royal scepter"]),
    ("queen", "I advise the king and keep the court in order.", "A graceful queen with a cool gaze.", [], [], []),
    ("royal guard", "I protect the king and the castle with my life.", "A guard in polished armor.", [], ["chainmail"], ["spear"]),
    ("court jester", "I juggle and joke to amuse the court.", "A jester in a bright motley suit.", [], [], []),
    ("castle cook", "I feed the whole castle from my kitchen.", "A sweating cook with a ladle.", ["bowl of stew"], [], []),
    ("knight", "I serve the king in battle and tournament.", "A knight in shining armor.", [], ["chainmail"], ["steel longsword"]),
    ("prisoner", "I was thrown in the dungeon for a crime I did not commit.", "A thin prisoner in chains.", [], ["iron shackles"], []),
    ("jailer", "I guard the prisoners in the castle dungeon.", "A grim jailer with a ring of keys.", ["iron key"], [], []),
    ("royal advisor", "I whisper counsel in the king's ear.", "A thin advisor in dark robes.", [], [], []),
    ("squire", "I serve a knight and hope to become one myself.", "A young squire carrying a shield.", ["shield"], [], []),
    ("chambermaid", "I clean the royal chambers and hear many secrets.", "A tidy maid with an apron.", ["torch"], [], []),
    ("royal archer", "I guard the castle walls with my bow.", "A sharp-eyed archer on the watchtower.", [], [], ["hunting bow"]),
    # mountain and forest
    ("hunter", "I track deer and bear through the forest.", "A weathered hunter in furs.", ["hunter's satchel"], ["bear pelt"], ["hunting bow"]),
    ("woodcutter", "I fell pine trees in the forest for the town.", "A burly woodcutter.", [], [], ["woodcutter's axe"]),
    ("mountain hermit", "I live alone on the mountain and speak with the wind.", "A bearded hermit.", [], ["fur cloak"], ["walking staff"]),
    ("bear", "I am a great brown bear who loves honey.", "A huge brown bear.", [], [], []),
    ("wolf", "I hunt with my pack in the forest at night.", "A grey wolf with yellow eyes.", [], [], []),
    ("forest ranger", "I guard the forest and its creatures from poachers.", "A ranger in green.", ["rope"], ["leather boots"], []),
    ("shepherd", "I guide my sheep through the mountain pass.", "A shepherd with a crook.", ["water skin"], [], []),
    ("goat herder", "I keep goats on the rocky slopes.", "A goat herder with a bell.", [], [], []),
    ("wandering bard", "I travel the roads singing songs of old heroes.", "A bard with a lute.", [], [], []),
    ("lost traveler", "I took a wrong turn in the forest and cannot find the road.", "A tired traveler.", ["backpack"], [], []),
    ("druid", "I keep the old ways of the forest and its stones.", "A druid in a leaf cloak.", ["wild berries"], [], []),
    ("eagle", "I soar above the mountain peaks.", "A golden eagle.", [], [], []),
    # coast
    ("fisherman", "I fish the sea every morning from the dock.", "A fisherman smelling of salt.", ["fishing net"], [], ["fishing rod"]),
    ("lighthouse keeper", "I keep the great lamp burning through every storm.", "A lonely keeper.", ["telescope"], [], []),
    ("sailor", "I have sailed every sea and seen strange things.", "A tattooed sailor.", ["rope"], [], []),
    ("pirate captain", "I command a ship of pirates and fear no navy.", "A captain with a scar.", ["treasure map"], ["pirate hat"], ["cutlass"]),
    ("smuggler", "I move rum and secrets past the harbor master.", "A sly smuggler.", ["bottle of rum"], [], []),
    ("fishmonger", "I sell the morning catch in the harbor market.", "A loud fishmonger.", ["salted herring"], [], []),
    ("harbor master", "I collect the harbor fees and watch for smugglers.", "A stern official.", [], ["eyeglasses"], []),
    ("mermaid", "I sing to sailors from the rocks below the cliffs.", "A mermaid with silver scales.", ["sea shell"], [], []),
    ("ship's cook", "I cook fish stew for hungry sailors.", "A cook with a wooden leg.", ["raw fish"], [], []),
    ("dock worker", "I load and unload ships on the dock.", "A strong dock worker.", [], [], ["oar"]),
    ("crab", "I scuttle sideways across the sand.", "A red crab.", [], [], []),
    ("seagull", "I steal fish from anyone who is not watching.", "A noisy seagull.", [], [], []),
    # magic
    ("wizard", "I study the arcane arts in my tower.", "An old wizard with a long beard.", ["spellbook"], ["pointed hat"], ["wizard's staff"]),
    ("apprentice", "I fetch reagents for the wizard and hope to learn magic.", "A nervous young apprentice.", ["glass vial"], [], []),
    ("alchemist", "I brew potions and seek to turn lead into gold.", "An alchemist with singed eyebrows.", ["potion of healing"], [], []),
    ("librarian", "I guard the scrolls of the library in silence.", "A stern librarian.", ["scroll of fire"], [], []),
    ("astronomer", "I chart the stars to read the future.", "An astronomer with ink-stained hands.", ["star chart"], [], []),
    ("enchantress", "I weave spells into rings and flowers.", "A beautiful enchantress.", [], ["enchanted ring"], []),
    ("golem", "I am made of stone and obey my maker.", "A hulking stone golem.", [], [], []),
    ("familiar cat", "I am the wizard's cat and I know more than I say.", "A black cat with green eyes.", [], [], []),
    ("summoner", "I call creatures from other worlds.", "A summoner in a silver robe.", [], ["silver robe"], ["wand of sparks"]),
    ("imp", "I am a small mischievous demon.", "A red imp with a forked tail.", [], [], []),
    ("crystal miner", "I mine glowing crystals from the cavern walls.", "A dusty miner.", ["crystal ball"], [], []),
    ("herbalist", "I gather herbs for potions and remedies.", "An herbalist with a basket.", ["dried herbs"], [], []),
]

# name, description, affordances, contained_examples
OBJECTS = [
    # town
    ("candle", "A thin wax candle that gives a small flickering light.", ["gettable"], []),
    ("backpack", "A worn leather backpack with many straps.", ["gettable", "wearable", "container"], ["loaf of bread", "rope"]),
    ("pouch", "A small leather pouch tied with a string.", ["gettable", "container"], ["coins", "eyeglasses"]),
    ("coins", "A handful of copper and silver coins.", ["gettable"], []),
    ("eyeglasses", "A pair of round eyeglasses with wire frames.", ["gettable", "wearable"], []),
    ("loaf of bread", "A fresh crusty loaf of bread.", ["gettable", "edible"], []),
    ("mug of ale", "A foaming mug of brown ale.", ["gettable", "drinkable"], []),
    ("wooden sword", "A practice sword carved from oak.", ["gettable", "wieldable"], []),
    ("broom", "A straw broom for sweeping floors.", ["gettable"], []),
    ("lantern", "An iron lantern with a glass window.", ["gettable"], []),
    ("wooden bench", "A long wooden bench for sitting.", ["surface"], []),
    ("market stall", "A wooden stall with a striped awning.", ["surface"], []),
    ("apple", "A crisp red apple.", ["gettable", "edible"], []),
    ("hammer", "A heavy smith's hammer.", ["gettable", "wieldable"], []),
    ("anvil", "A massive iron anvil.", ["surface"], []),
    ("wool cloak", "A warm cloak of grey wool.", ["gettable", "wearable"], []),
    # castle
    ("golden crown", "A crown of gold set with rubies.", ["gettable", "wearable"], []),
    ("royal scepter", "A jeweled scepter of the king.", ["gettable", "wieldable"], []),
    ("banquet table", "A long oak table set for a feast.", ["surface"], []),
    ("goblet of wine", "A silver goblet of red wine.", ["gettable", "drinkable"], []),
    ("roast boar", "A whole roast boar with an apple in its mouth.", ["gettable", "edible"], []),
    ("cooking pot", "A large iron cooking pot.", ["gettable", "container"], ["bowl of stew"]),
    ("bowl of stew", "A steaming bowl of meat stew.", ["gettable", "edible"], []),
    ("iron shackles", "Rusty iron shackles on a chain.", ["gettable", "wearable"], []),
    ("iron key", "A large iron key.", ["gettable"], []),
    ("torch", "A burning torch of pitch and cloth.", ["gettable", "wieldable"], []),
    ("steel longsword", "A sharp steel longsword.", ["gettable", "wieldable"], []),
    ("spear", "A long spear with an iron tip.", ["gettable", "wieldable"], []),
    ("shield", "A round shield painted with the royal crest.", ["gettable", "wieldable"], []),
    ("tapestry", "A woven tapestry of a hunting scene.", [], []),
    ("treasure chest", "An iron-bound chest full of treasure.", ["container", "surface"], ["coins", "golden crown"]),
    ("chainmail", "A shirt of linked steel rings.", ["gettable", "wearable"], []),
    # mountain and forest
    ("walking staff", "A sturdy staff of ash wood.", ["gettable", "wieldable"], []),
    ("fur cloak", "A thick cloak of wolf fur.", ["gettable", "wearable"], []),
    ("rope", "A coil of hemp rope.", ["gettable"], []),
    ("water skin", "A leather skin full of cold water.", ["gettable", "drinkable"], []),
    ("pine cone", "A sticky pine cone.", ["gettable"], []),
    ("woodcutter's axe", "A sharp axe for felling trees.", ["gettable", "wieldable"], []),
    ("hunting bow", "A bow of yew with a taut string.", ["gettable", "wieldable"], []),
    ("bear pelt", "The thick pelt of a brown bear.", ["gettable", "wearable"], []),
    ("deer antlers", "A large pair of deer antlers.", ["gettable"], []),
    ("hunter's satchel", "A leather satchel for game and tools.", ["gettable", "container"], ["rope", "pine cone"]),
    ("wild berries", "A handful of sweet wild berries.", ["gettable", "edible"], []),
    ("tree stump", "A wide flat tree stump.", ["surface"], []),
    ("campfire", "A crackling campfire ringed with stones.", [], []),
    ("honeycomb", "A dripping piece of honeycomb.", ["gettable", "edible"], []),
    ("sack of grain", "A heavy sack of grain.", ["gettable", "container"], ["wild berries"]),
    ("leather boots", "A pair of worn leather boots.", ["gettable", "wearable"], []),
    # coast
    ("fishing net", "A wide net of knotted cord.", ["gettable"], []),
    ("bucket of fish", "A wooden bucket of fresh fish.", ["gettable", "container"], ["raw fish"]),
    ("fishing rod", "A long bamboo fishing rod.", ["gettable", "wieldable"], []),
    ("telescope", "A brass telescope for spotting ships.", ["gettable"], []),
    ("oar", "A long wooden oar.", ["gettable", "wieldable"], []),
    ("sea shell", "A spiral sea shell.", ["gettable"], []),
    ("lobster trap", "A wooden trap for catching lobsters.", ["gettable", "container"], ["raw fish"]),
    ("salted herring", "A string of salted herring.", ["gettable", "edible"], []),
    ("barrel of rum", "A barrel of dark rum.", ["container"], ["bottle of rum"]),
    ("bottle of rum", "A bottle of strong rum.", ["gettable", "drinkable"], []),
    ("anchor", "A rusty iron anchor.", [], []),
    ("cutlass", "A curved pirate cutlass.", ["gettable", "wieldable"], []),
    ("treasure map", "A faded map marked with an X.", ["gettable"], []),
    ("raw fish", "A slippery raw fish.", ["gettable", "edible"], []),
    ("pirate hat", "A black tricorn hat.", ["gettable", "wearable"], []),
    ("rowboat", "A small wooden rowboat.", ["container", "surface"], ["oar", "fishing net"]),
    # magic
    ("spellbook", "A heavy book of spells bound in leather.", ["gettable"], []),
    ("wizard's staff", "A gnarled staff topped with a crystal.", ["gettable", "wieldable"], []),
    ("pointed hat", "A tall pointed wizard's hat.", ["gettable", "wearable"], []),
    ("reagent shelf", "A shelf crowded with jars of reagents.", ["surface"], []),
    ("dried herbs", "A bundle of dried herbs.", ["gettable", "edible"], []),
    ("eye of newt", "A jar of eye of newt.", ["gettable", "edible"], []),
    ("glass vial", "A small stoppered glass vial.", ["gettable", "container"], ["potion of healing"]),
    ("bubbling cauldron", "A cauldron bubbling with green liquid.", ["container"], ["dried herbs", "eye of newt"]),
    ("potion of healing", "A red potion that heals wounds.", ["gettable", "drinkable"], []),
    ("mortar and pestle", "A stone mortar and pestle for grinding.", ["gettable"], []),
    ("scroll of fire", "A scroll inscribed with a fire spell.", ["gettable"], []),
    ("star chart", "A chart of the stars and planets.", ["gettable"], []),
    ("crystal ball", "A glass ball swirling with mist.", ["gettable"], []),
    ("enchanted ring", "A silver ring that glows faintly.", ["gettable", "wearable"], []),
    ("wand of sparks", "A short wand that spits sparks.", ["gettable", "wieldable"], []),
    ("silver robe", "A flowing robe of silver cloth.", ["gettable", "wearable"], []),
]

FILLERS = [
    ("abandoned shack", "A rickety shack with a sagging roof. Nobody has lived here for years."),
    ("empty closet", "A cramped closet with bare shelves and a musty smell."),
    ("storage room", "Crates and sacks are stacked against the walls of this plain room."),
    ("unused chamber", "A bare chamber with nothing of note inside."),
    ("hallway", "A long hallway with plain walls and a worn floor."),
    ("empty storage room", "Empty shelves line this dusty storage room."),
    ("dusty corridor", "Dust drifts along a narrow corridor between rooms."),
    ("narrow passage", "A tight passage barely wide enough for one person."),
    ("quiet alcove", "A small alcove set back from the main path."),
    ("old cellar", "A cool cellar with a packed dirt floor."),
    ("bare antechamber", "A plain waiting room before a larger space."),
    ("small landing", "A small landing where two stairways meet."),
    ("cold stairwell", "Stone steps wind upward in a chilly stairwell."),
    ("plain courtyard", "An open courtyard paved with uneven stones."),
    ("dim vestibule", "A dim entryway with a single hook on the wall."),
    ("back room", "A cluttered back room used for odds and ends."),
    ("cramped pantry", "A cramped pantry with a few empty jars."),
    ("disused shed", "A wooden shed that has not been opened in a long time."),
    ("forgotten attic", "A low attic under the rafters, thick with cobwebs."),
    ("side passage", "A side passage branching off the main way."),
    ("stone path", "A simple path of flat stones through the grass."),
    ("dirt road", "A rutted dirt road leading onward."),
    ("empty barn", "A barn with empty stalls and a little old hay."),
    ("overgrown clearing", "A small clearing choked with weeds."),
    ("drafty loft", "A drafty loft reached by a wobbly ladder."),
]


def allocate(n, ratios):
    exact = [n * r for r in ratios]
    counts = [int(e + 1e-9) for e in exact]
    order = sorted(range(3), key=lambda i: (-(exact[i] - counts[i]), i))
    for i in order[: n - sum(counts)]:
        counts[i] += 1
    return counts


def split_ids(ids, rng):
    ids = sorted(ids)
    rng.shuffle(ids)
    a, b, _ = allocate(len(ids), (0.8, 0.1, 0.1))
    return {
        "train": sorted(ids[:a]),
        "valid": sorted(ids[a : a + b]),
        "test": sorted(ids[a + b :]),
    }


def build():
    locations = [
        {
            "id": f"loc-{i + 1:03d}",
            "name": name,
            "description": desc,
            "background": "",
            "neighbors": nbrs,
            "characters": chars,
            "objects": objs,
            "category": cat,
        }
        for i, (name, cat, desc, nbrs, chars, objs) in enumerate(LOCATIONS)
    ]
    characters = [
        {
            "id": f"chr-{i + 1:03d}",
            "name": name,
            "persona": persona,
            "description": desc,
            "carrying": carrying,
            "wearing": wearing,
            "wielding": wielding,
        }
        for i, (name, persona, desc, carrying, wearing, wielding) in enumerate(CHARACTERS)
    ]
    objects = [
        {
            "id": f"obj-{i + 1:03d}",
            "name": name,
            "description": desc,
            "affordances": aff,
            "contained_examples": inside,
        }
        for i, (name, desc, aff, inside) in enumerate(OBJECTS)
    ]
    fillers = [
        {"id": f"filler-{i + 1}", "name": name, "description": desc, "category": "other"}
        for i, (name, desc) in enumerate(FILLERS)
    ]

    rng = random.Random(7)
    location_split = split_ids([l["id"] for l in locations], rng)
    container_split = split_ids(
        [o["id"] for o in objects if "container" in o["affordances"]], rng
    )
    splits = {
        "location": location_split,
        "character": location_split,
        "object": location_split,
        "container": container_split,
    }
    return {
        "locations": locations,
        "filler_locations": fillers,
        "characters": characters,
        "objects": objects,
        "splits": splits,
    }


def check(doc):
    names = {
        "location": {l["name"].lower() for l in doc["locations"]},
        "character": {c["name"].lower() for c in doc["characters"]},
        "object": {o["name"].lower() for o in doc["objects"]},
    }
    for l in doc["locations"]:
        for n in l["neighbors"]:
            assert n.lower() in names["location"], (l["name"], n)
        for n in l["characters"]:
            assert n.lower() in names["character"], (l["name"], n)
        for n in l["objects"]:
            assert n.lower() in names["object"], (l["name"], n)
    for c in doc["characters"]:
        lists = [c["carrying"], c["wearing"], c["wielding"]]
        flat = [n for lst in lists for n in lst]
        assert len(flat) == len(set(flat)), c["name"]
        for n in flat:
            assert n.lower() in names["object"], (c["name"], n)
    for o in doc["objects"]:
        for n in o["contained_examples"]:
            assert n.lower() in names["object"], (o["name"], n)
        if o["contained_examples"]:
            assert "container" in o["affordances"], o["name"]
    assert len(doc["locations"]) == 40
    assert len(doc["characters"]) == 60
    assert len(doc["objects"]) == 80
    assert len(doc["filler_locations"]) == 25


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="data/sample_corpus.json")
    args = parser.parse_args()
    doc = build()
    check(doc)
    with open(args.out, "w", encoding="utf-8") as f:
        json.dump(doc, f, indent=1, ensure_ascii=False)
        f.write("\n")


if __name__ == "__main__":
    main()
