#!/usr/bin/env python3
"""Regenerates the shipped reference data under data/ and the labeled test
fixtures under tests/fixtures/.

Everything here is authored content (recipe corpus, lexicons, reference
tables). The script is deterministic; rerunning it reproduces the committed
files byte for byte.
"""
import csv
import json
import random
from pathlib import Path

ROOT = Path(__file__).resolve().parents[2]
DATA = ROOT / "data"
FIXTURES = ROOT / "tests" / "fixtures"

FOODS = ["Shellfish", "Mackerel", "Trout", "Salmon", "Tuna", "Pork", "Beef",
         "Turkey", "Chicken", "Egg", "Milk", "Tomatoes"]

# mcg per 100 g. Tomatoes are not listed in the source table; content is negligible.
NUTRIENTS = {"Shellfish": 98.89, "Mackerel": 19, "Beef": 6, "Trout": 3.8,
             "Salmon": 2.4, "Tuna": 1.6, "Milk": 0.9, "Turkey": 0.8,
             "Egg": 0.6, "Pork": 0.4, "Chicken": 0.3, "Tomatoes": 0.0}

FOOD_GROUPS = {"Shellfish": "fish_seafood", "Mackerel": "fish_seafood",
               "Trout": "fish_seafood", "Salmon": "fish_seafood",
               "Tuna": "fish_seafood", "Pork": "pork", "Beef": "beef",
               "Turkey": "poultry", "Chicken": "poultry", "Egg": "eggs",
               "Milk": "milk", "Tomatoes": "none"}

SYNONYMS = {
    "Shellfish": ["shellfish", "shrimp", "prawns", "crab", "crab meat", "lobster",
                  "clams", "mussels", "scallops", "oysters", "crawfish"],
    "Mackerel": ["mackerel", "smoked mackerel"],
    "Trout": ["trout", "rainbow trout", "smoked trout"],
    "Salmon": ["salmon", "smoked salmon", "salmon fillets"],
    "Tuna": ["tuna", "ahi tuna", "tuna steaks", "canned tuna"],
    "Pork": ["pork", "pig", "bacon", "ham", "pancetta", "chorizo", "prosciutto",
             "andouille", "pork shoulder", "pork chops", "pork belly",
             "ground pork", "canadian bacon", "pork sausage", "pork ribs"],
    "Beef": ["beef", "ground beef", "steak", "brisket", "sirloin", "chuck roast",
             "beef tenderloin", "flank steak", "corned beef"],
    "Turkey": ["turkey", "ground turkey", "turkey breast"],
    "Chicken": ["chicken", "chicken breast", "chicken thighs", "chicken wings"],
    "Egg": ["egg", "eggs", "egg yolk", "egg yolks", "egg whites"],
    "Milk": ["milk", "whole milk", "buttermilk", "evaporated milk", "condensed milk"],
    "Tomatoes": ["tomato", "tomatoes", "tomato paste", "tomato sauce",
                 "cherry tomatoes", "green tomatoes", "crushed tomatoes"],
    # Phrases that contain a tracked word but are not the tracked food.
    "none": ["coconut milk", "almond milk", "oat milk", "soy milk", "egg noodles",
             "milk chocolate", "chicken broth", "beef broth", "turkey bacon"],
}

# title -> free-text ingredient list
RECIPES = [
    # shellfish
    ("Shrimp Scampi", ["1 lb shrimp", "butter", "garlic", "white wine", "lemon", "parsley"]),
    ("Garlic Butter Shrimp", ["shrimp", "butter", "garlic"]),
    ("Shrimp and Grits", ["shrimp", "grits", "cheddar cheese", "bacon", "milk"]),
    ("Clam Chowder", ["clams", "potatoes", "onion", "bacon", "milk", "heavy cream"]),
    ("Crab Cakes", ["crab meat", "breadcrumbs", "1 egg", "mayonnaise", "old bay"]),
    ("Lobster Bisque", ["lobster", "butter", "tomato paste", "heavy cream", "sherry"]),
    ("Steamed Mussels", ["mussels", "white wine", "garlic", "shallots"]),
    ("Seafood Paella", ["shrimp", "mussels", "chicken thighs", "chorizo", "rice", "tomatoes", "saffron"]),
    ("Coconut Shrimp", ["shrimp", "shredded coconut", "egg", "flour"]),
    ("Shrimp Fried Rice", ["shrimp", "rice", "2 eggs", "peas", "soy sauce"]),
    ("Grilled Scallops", ["scallops", "lemon", "olive oil"]),
    ("Oysters Rockefeller", ["oysters", "spinach", "butter", "breadcrumbs"]),
    ("Lobster Roll", ["lobster", "mayonnaise", "celery", "hot dog buns"]),
    ("Shrimp Tacos", ["shrimp", "tortillas", "cabbage", "lime"]),
    ("Cioppino", ["crab", "clams", "shrimp", "cod", "crushed tomatoes"]),
    ("Shrimp Gumbo", ["shrimp", "andouille", "okra", "tomatoes", "roux"]),
    ("Shrimp Cocktail", ["shrimp", "ketchup", "horseradish"]),
    ("Crawfish Etouffee", ["crawfish", "butter", "celery", "bell pepper"]),
    # mackerel
    ("Grilled Mackerel", ["mackerel", "lemon", "olive oil"]),
    ("Smoked Mackerel Pate", ["smoked mackerel", "cream cheese", "horseradish"]),
    ("Pan Fried Mackerel", ["mackerel", "flour", "butter"]),
    ("Mackerel Curry", ["mackerel", "coconut milk", "tomatoes", "curry paste"]),
    ("Mackerel with Tomatoes", ["mackerel", "cherry tomatoes", "basil"]),
    ("Mackerel Fish Cakes", ["mackerel", "potatoes", "egg"]),
    ("Teriyaki Mackerel", ["mackerel", "soy sauce", "mirin"]),
    # trout
    ("Trout Almondine", ["trout", "almonds", "butter", "lemon"]),
    ("Baked Trout", ["trout", "lemon", "dill"]),
    ("Smoked Trout Salad", ["smoked trout", "lettuce", "eggs", "capers"]),
    ("Pan Fried Trout", ["trout", "cornmeal", "butter"]),
    ("Trout Chowder", ["trout", "potatoes", "milk"]),
    ("Grilled Rainbow Trout", ["rainbow trout", "herbs", "lemon"]),
    # salmon
    ("Baked Salmon", ["salmon fillets", "lemon", "garlic"]),
    ("Grilled Salmon", ["salmon", "olive oil", "dill"]),
    ("Salmon Patties", ["canned salmon", "egg", "breadcrumbs"]),
    ("Teriyaki Salmon", ["salmon", "soy sauce", "brown sugar"]),
    ("Honey Glazed Salmon", ["salmon", "honey", "mustard"]),
    ("Salmon Chowder", ["salmon", "milk", "potatoes", "corn"]),
    ("Smoked Salmon Bagel", ["smoked salmon", "cream cheese", "bagel", "capers"]),
    ("Creamy Salmon Pasta", ["salmon", "milk", "pasta", "spinach"]),
    ("Poached Salmon", ["salmon", "white wine", "peppercorns"]),
    ("Cedar Plank Salmon", ["salmon", "cedar plank", "brown sugar"]),
    ("Blackened Salmon", ["salmon", "cajun seasoning", "butter"]),
    # tuna
    ("Tuna Salad", ["canned tuna", "mayonnaise", "celery"]),
    ("Tuna Casserole", ["tuna", "egg noodles", "milk", "peas"]),
    ("Tuna Melt", ["tuna", "cheddar cheese", "bread"]),
    ("Seared Ahi Tuna", ["ahi tuna", "sesame seeds", "soy sauce"]),
    ("Tuna Steak", ["tuna steaks", "olive oil", "pepper"]),
    ("Tuna Pasta Salad", ["tuna", "pasta", "mayonnaise", "peas"]),
    ("Spicy Tuna Roll", ["tuna", "sushi rice", "nori", "sriracha"]),
    ("Tuna Nicoise Salad", ["tuna", "eggs", "tomatoes", "potatoes", "green beans"]),
    # pork
    ("Pulled Pork", ["pork shoulder", "bbq sauce", "brown sugar"]),
    ("Pork Chops", ["pork chops", "garlic", "thyme"]),
    ("Carnitas", ["pork shoulder", "orange", "cumin"]),
    ("Pork Tenderloin", ["pork", "rosemary", "garlic"]),
    ("Baked Ham", ["ham", "cloves", "brown sugar"]),
    ("Honey Glazed Ham", ["ham", "honey", "mustard"]),
    ("Pork Fried Rice", ["pork", "rice", "egg", "soy sauce"]),
    ("Sweet and Sour Pork", ["pork", "pineapple", "ketchup", "vinegar"]),
    ("BBQ Ribs", ["pork ribs", "bbq sauce"]),
    ("Pork Schnitzel", ["pork", "egg", "breadcrumbs"]),
    ("Split Pea Soup", ["ham", "split peas", "carrots"]),
    ("Pork Stir Fry", ["pork", "bell pepper", "soy sauce"]),
    ("Pork Belly", ["pork belly", "salt", "five spice"]),
    ("Biscuits and Gravy", ["pork sausage", "milk", "flour", "biscuits"]),
    ("Spaghetti Carbonara", ["pancetta", "2 eggs", "parmesan", "spaghetti"]),
    ("Pork Dumplings", ["ground pork", "cabbage", "dumpling wrappers"]),
    ("Ham and Bean Soup", ["ham", "navy beans", "onion"]),
    ("Pork Roast", ["pork", "garlic", "apples"]),
    ("Bacon Cheeseburger", ["ground beef", "bacon", "cheddar cheese", "buns"]),
    # beef
    ("Beef Stew", ["2 lb beef chuck", "potatoes", "carrots", "tomato paste"]),
    ("Irish Beef Stew", ["beef", "guinness", "potatoes"]),
    ("Beef Stroganoff", ["beef", "mushrooms", "sour cream", "egg noodles"]),
    ("Meatloaf", ["ground beef", "egg", "milk", "ketchup"]),
    ("Roast Beef", ["beef", "garlic", "rosemary"]),
    ("Pot Roast", ["chuck roast", "carrots", "potatoes"]),
    ("Beef Tacos", ["ground beef", "tortillas", "tomatoes", "lettuce"]),
    ("Chili Con Carne", ["ground beef", "kidney beans", "tomatoes", "chili powder"]),
    ("Spaghetti Bolognese", ["ground beef", "tomatoes", "milk", "pancetta"]),
    ("Beef and Broccoli", ["flank steak", "broccoli", "soy sauce"]),
    ("Beef Brisket", ["brisket", "onion", "paprika"]),
    ("Steak Fajitas", ["steak", "peppers", "tortillas"]),
    ("Beef Wellington", ["beef tenderloin", "mushrooms", "puff pastry", "egg"]),
    ("Swedish Meatballs", ["ground beef", "ground pork", "milk", "egg"]),
    ("Shepherds Pie", ["ground beef", "potatoes", "milk", "peas"]),
    ("Cheeseburger", ["ground beef", "cheddar cheese", "buns"]),
    ("Philly Cheesesteak", ["sirloin", "provolone", "hoagie rolls"]),
    ("Beef Stir Fry", ["beef", "bell pepper", "soy sauce"]),
    ("Corned Beef and Cabbage", ["corned beef", "cabbage", "potatoes"]),
    ("Lasagna", ["ground beef", "tomato sauce", "ricotta", "egg", "lasagna noodles"]),
    ("Stuffed Peppers", ["ground beef", "rice", "tomatoes", "bell peppers"]),
    ("Beef Barley Soup", ["beef", "barley", "carrots"]),
    ("Korean Bulgogi", ["beef", "soy sauce", "pear"]),
    ("Grilled Steak", ["steak", "salt", "pepper"]),
    # turkey
    ("Roast Turkey", ["turkey", "butter", "sage"]),
    ("Turkey Meatballs", ["ground turkey", "egg", "breadcrumbs"]),
    ("Turkey Chili", ["ground turkey", "beans", "tomatoes"]),
    ("Turkey Burgers", ["ground turkey", "onion", "buns"]),
    ("Turkey Soup", ["turkey", "carrots", "celery"]),
    ("Turkey Pot Pie", ["turkey", "milk", "peas", "pie crust"]),
    ("Turkey Tetrazzini", ["turkey", "milk", "spaghetti", "mushrooms"]),
    ("Turkey Club Sandwich", ["turkey breast", "bacon", "tomato", "bread"]),
    ("Smoked Turkey", ["turkey", "wood chips", "brine"]),
    ("Turkey Gravy", ["turkey", "flour", "stock"]),
    ("Turkey Meatloaf", ["ground turkey", "egg", "ketchup"]),
    # chicken
    ("Fried Chicken", ["chicken", "buttermilk", "flour"]),
    ("Chicken Soup", ["chicken", "carrots", "celery"]),
    ("Chicken Noodle Soup", ["chicken", "egg noodles", "carrots"]),
    ("Chicken Parmesan", ["chicken breast", "egg", "breadcrumbs", "tomato sauce", "mozzarella"]),
    ("Chicken Curry", ["chicken", "tomatoes", "coconut milk", "curry powder"]),
    ("Chicken Alfredo", ["chicken breast", "milk", "fettuccine", "parmesan"]),
    ("Chicken Enchiladas", ["chicken", "tortillas", "tomato sauce"]),
    ("Roast Chicken", ["whole chicken", "lemon", "thyme"]),
    ("Chicken Marsala", ["chicken breast", "marsala wine", "mushrooms"]),
    ("Chicken Pot Pie", ["chicken", "milk", "peas", "pie crust"]),
    ("Buffalo Wings", ["chicken wings", "hot sauce", "butter"]),
    ("Chicken Stir Fry", ["chicken", "broccoli", "soy sauce"]),
    ("Chicken Fajitas", ["chicken", "peppers", "tortillas"]),
    ("Butter Chicken", ["chicken thighs", "tomatoes", "cream", "garam masala"]),
    ("Chicken Tikka Masala", ["chicken", "yogurt", "tomato sauce"]),
    ("Chicken Caesar Salad", ["chicken breast", "romaine", "egg yolk", "parmesan"]),
    ("Lemon Chicken", ["chicken", "lemon", "garlic"]),
    ("Teriyaki Chicken", ["chicken thighs", "soy sauce", "mirin"]),
    ("Chicken Salad", ["chicken", "mayonnaise", "celery", "grapes"]),
    ("Chicken Casserole", ["chicken", "milk", "rice"]),
    ("BBQ Chicken", ["chicken", "bbq sauce"]),
    ("Chicken Quesadilla", ["chicken", "tortillas", "cheese"]),
    ("Chicken and Dumplings", ["chicken", "milk", "flour"]),
    ("General Tso Chicken", ["chicken", "egg", "cornstarch", "chili"]),
    ("Chicken Cacciatore", ["chicken", "tomatoes", "peppers"]),
    ("Jambalaya", ["chicken", "andouille", "shrimp", "tomatoes", "rice"]),
    ("Chicken Wings", ["chicken wings", "salt", "pepper"]),
    # eggs
    ("Deviled Eggs", ["eggs", "mayonnaise", "paprika"]),
    ("Scrambled Eggs", ["eggs", "milk", "butter"]),
    ("Egg Salad", ["eggs", "mayonnaise", "mustard"]),
    ("Quiche Lorraine", ["eggs", "bacon", "milk", "pie crust"]),
    ("French Toast", ["eggs", "milk", "bread", "cinnamon"]),
    ("Frittata", ["eggs", "spinach", "onion"]),
    ("Eggs Benedict", ["eggs", "canadian bacon", "english muffins", "hollandaise"]),
    ("Shakshuka", ["eggs", "tomatoes", "peppers"]),
    ("Egg Fried Rice", ["eggs", "rice", "scallions"]),
    ("Hard Boiled Eggs", ["eggs", "water"]),
    ("Poached Eggs", ["eggs", "vinegar"]),
    ("Spanish Omelette", ["eggs", "potatoes", "onion"]),
    ("Pancakes", ["eggs", "milk", "flour"]),
    ("Waffles", ["eggs", "milk", "flour", "butter"]),
    ("Custard Pie", ["eggs", "milk", "sugar", "pie crust"]),
    ("Egg Drop Soup", ["eggs", "vegetable stock", "scallions"]),
    ("Huevos Rancheros", ["eggs", "tomatoes", "tortillas"]),
    ("Banana Bread", ["bananas", "eggs", "flour"]),
    # milk
    ("Rice Pudding", ["milk", "rice", "sugar"]),
    ("Hot Chocolate", ["milk", "cocoa powder", "sugar"]),
    ("Milkshake", ["milk", "ice cream"]),
    ("Mac and Cheese", ["milk", "macaroni", "cheddar cheese"]),
    ("Bechamel Sauce", ["milk", "butter", "flour"]),
    ("Milk Tea", ["black tea", "milk", "sugar"]),
    ("Panna Cotta", ["milk", "heavy cream", "gelatin"]),
    ("Tres Leches Cake", ["evaporated milk", "condensed milk", "milk", "eggs"]),
    ("Mashed Potatoes", ["potatoes", "milk", "butter"]),
    ("Potato Soup", ["potatoes", "milk", "bacon"]),
    ("Homemade Yogurt", ["whole milk", "yogurt starter"]),
    ("Golden Milk", ["milk", "turmeric", "honey"]),
    ("Milk Bread", ["milk", "flour", "yeast"]),
    # tomatoes
    ("Tomato Soup", ["tomatoes", "onion", "vegetable stock"]),
    ("Bruschetta", ["tomatoes", "basil", "baguette"]),
    ("Caprese Salad", ["tomatoes", "mozzarella", "basil"]),
    ("Fresh Salsa", ["tomatoes", "onion", "cilantro"]),
    ("Gazpacho", ["tomatoes", "cucumber", "peppers"]),
    ("Marinara Sauce", ["crushed tomatoes", "garlic", "basil"]),
    ("Fried Green Tomatoes", ["green tomatoes", "cornmeal", "egg", "buttermilk"]),
    ("Stuffed Tomatoes", ["tomatoes", "rice", "herbs"]),
    ("Tomato Basil Pasta", ["cherry tomatoes", "basil", "pasta"]),
    ("Pico de Gallo", ["tomatoes", "onion", "jalapeno"]),
    ("Ratatouille", ["eggplant", "zucchini", "tomatoes"]),
    ("Margherita Pizza", ["tomato sauce", "mozzarella", "basil", "pizza dough"]),
    ("Roasted Tomatoes", ["tomatoes", "olive oil", "garlic"]),
    ("Homemade Tomato Sauce", ["tomatoes", "onion", "garlic"]),
    ("Panzanella", ["tomatoes", "bread", "cucumber"]),
    ("Minestrone", ["tomatoes", "beans", "pasta", "vegetable stock"]),
    # no tracked ingredient; excluded at load
    ("Guacamole", ["avocados", "lime", "onion"]),
    ("Fruit Salad", ["apple", "banana", "grapes"]),
    ("Hummus", ["chickpeas", "tahini", "lemon"]),
    ("Vegetable Curry", ["coconut milk", "chickpeas", "spinach"]),
    ("Eggplant Stir Fry", ["eggplant", "soy sauce", "garlic"]),
]

TARGETS = {
    "antidepressants": [
        "sertraline", "zoloft", "citalopram", "celexa", "escitalopram", "lexapro",
        "fluoxetine", "prozac", "paroxetine", "paxil", "fluvoxamine", "luvox",
        "duloxetine", "cymbalta", "venlafaxine", "effexor", "desvenlafaxine",
        "pristiq", "trazodone", "desyrel", "bupropion", "wellbutrin", "mirtazapine",
        "remeron", "amitriptyline", "elavil", "nortriptyline", "pamelor",
        "imipramine", "tofranil", "doxepin", "sinequan", "vilazodone", "viibryd",
        "vortioxetine", "trintellix", "phenelzine", "nardil", "levomilnacipran",
        "fetzima"],
    "neuropathic drugs": [
        "gabapentin", "neurontin", "pregabalin", "lyrica", "carbamazepine",
        "tegretol", "oxcarbazepine", "trileptal", "lamotrigine", "lamictal",
        "topiramate", "topamax", "lidocaine patch", "lidoderm", "capsaicin cream",
        "qutenza", "tramadol", "ultram", "tapentadol", "nucynta", "milnacipran",
        "savella", "horizant", "gralise", "valproic acid", "depakote", "phenytoin",
        "dilantin", "clonazepam", "klonopin"],
    "other pharmaceuticals": [
        "oxycodone", "oxycontin", "percocet", "hydrocodone", "vicodin", "norco",
        "morphine", "codeine", "fentanyl", "methadone", "buprenorphine",
        "ibuprofen", "advil", "motrin", "naproxen", "aleve", "acetaminophen",
        "tylenol", "celecoxib", "celebrex", "meloxicam", "mobic", "diclofenac",
        "cyclobenzaprine", "flexeril", "baclofen", "tizanidine", "methocarbamol",
        "diphenhydramine", "benadryl", "loratadine", "claritin", "cetirizine",
        "zyrtec", "fexofenadine", "allegra", "hydroxyzine", "promethazine"],
    "pain descriptions": [
        "neuropathy", "peripheral neuropathy", "nerve pain", "chronic pain",
        "back pain", "lower back pain", "neck pain", "joint pain", "burning feet",
        "numbness", "tingling", "pins and needles", "numb hands", "numb feet",
        "fibromyalgia", "sciatica", "paresthesia", "restless legs", "muscle pain",
        "leg cramps", "headache", "migraine", "diabetic neuropathy",
        "burning mouth", "shooting pain", "foot pain", "carpal tunnel",
        "chronic fatigue", "muscle weakness", "nerve damage"],
    "acid disorders": [
        "acid reflux", "gerd", "heartburn", "indigestion", "ulcer",
        "stomach ulcer", "peptic ulcer", "gastritis", "dyspepsia", "hiatal hernia",
        "barretts esophagus", "esophagitis", "acid indigestion", "stomach pain",
        "bloating", "sour stomach", "burping", "nausea", "gastroparesis",
        "h pylori"],
    "OTC antacids": [
        "omeprazole", "prilosec", "esomeprazole", "nexium", "lansoprazole",
        "prevacid", "pantoprazole", "protonix", "rabeprazole", "aciphex",
        "dexlansoprazole", "dexilant", "ranitidine", "zantac", "famotidine",
        "pepcid", "cimetidine", "tagamet", "tums", "rolaids", "maalox", "mylanta",
        "gaviscon", "alka seltzer", "pepto bismol", "milk of magnesia"],
    "psychotherapy": [
        "psychotherapy", "therapist", "counseling", "cognitive behavioral therapy",
        "cbt", "talk therapy", "psychologist", "psychiatrist", "support group",
        "mindfulness", "meditation", "biofeedback", "hypnotherapy", "dbt", "emdr",
        "group therapy"],
    "medical cannabis": [
        "medical marijuana", "cannabis", "cbd oil", "cbd", "thc", "dispensary",
        "medical cannabis", "cannabis oil", "marinol", "dronabinol", "sativex",
        "nabilone"],
}

CONTROLS = [
    "abacavir", "abatacept", "acarbose", "accutane", "acne", "acromegaly",
    "actinic keratosis", "acyclovir", "adalimumab", "addisons disease",
    "adenomyosis", "albuterol", "alendronate", "allopurinol", "alopecia",
    "amblyopia", "amoxicillin", "anastrozole", "angioedema", "appendicitis",
    "asthma", "astigmatism", "athletes foot", "atorvastatin", "azithromycin",
    "bacterial vaginosis", "bronchitis"]

# (n_indications, n_pain_indications); generic names first, brands share values.
INDICATIONS = {
    "sertraline": (18, 2), "citalopram": (15, 1), "escitalopram": (12, 1),
    "fluoxetine": (20, 2), "paroxetine": (17, 2), "fluvoxamine": (8, 1),
    "duloxetine": (16, 7), "venlafaxine": (14, 3), "desvenlafaxine": (8, 2),
    "trazodone": (13, 2), "bupropion": (15, 1), "mirtazapine": (11, 1),
    "amitriptyline": (19, 8), "nortriptyline": (12, 5), "imipramine": (10, 2),
    "doxepin": (9, 1), "vilazodone": (6, 0), "vortioxetine": (6, 0),
    "phenelzine": (5, 0), "levomilnacipran": (5, 1), "gabapentin": (22, 11),
    "pregabalin": (17, 10), "carbamazepine": (16, 4), "oxcarbazepine": (10, 2),
    "lamotrigine": (14, 1), "topiramate": (15, 3), "tramadol": (14, 6),
    "tapentadol": (7, 5), "milnacipran": (6, 4), "valproic acid": (14, 2),
    "phenytoin": (11, 1), "clonazepam": (13, 1), "oxycodone": (15, 10),
    "hydrocodone": (12, 9), "morphine": (14, 9), "codeine": (10, 6),
    "fentanyl": (11, 8), "methadone": (10, 5), "buprenorphine": (9, 4),
    "ibuprofen": (20, 9), "naproxen": (16, 8), "acetaminophen": (21, 10),
    "celecoxib": (12, 7), "meloxicam": (10, 6), "diclofenac": (13, 8),
    "cyclobenzaprine": (9, 5), "baclofen": (9, 3), "tizanidine": (8, 3),
    "methocarbamol": (6, 4), "diphenhydramine": (12, 1), "loratadine": (6, 0),
    "cetirizine": (7, 0), "fexofenadine": (5, 0), "hydroxyzine": (9, 1),
    "promethazine": (10, 1), "omeprazole": (12, 2), "esomeprazole": (10, 2),
    "lansoprazole": (9, 1), "pantoprazole": (11, 2), "rabeprazole": (6, 1),
    "dexlansoprazole": (5, 1), "ranitidine": (10, 2), "famotidine": (9, 2),
    "cimetidine": (7, 1), "dronabinol": (6, 2), "nabilone": (5, 3),
}
BRANDS = {
    "zoloft": "sertraline", "celexa": "citalopram", "lexapro": "escitalopram",
    "prozac": "fluoxetine", "paxil": "paroxetine", "cymbalta": "duloxetine",
    "effexor": "venlafaxine", "wellbutrin": "bupropion", "elavil": "amitriptyline",
    "neurontin": "gabapentin", "lyrica": "pregabalin", "tegretol": "carbamazepine",
    "lamictal": "lamotrigine", "topamax": "topiramate", "ultram": "tramadol",
    "nucynta": "tapentadol", "savella": "milnacipran", "depakote": "valproic acid",
    "klonopin": "clonazepam", "oxycontin": "oxycodone", "percocet": "oxycodone",
    "vicodin": "hydrocodone", "norco": "hydrocodone", "advil": "ibuprofen",
    "motrin": "ibuprofen", "aleve": "naproxen", "tylenol": "acetaminophen",
    "celebrex": "celecoxib", "mobic": "meloxicam", "flexeril": "cyclobenzaprine",
    "benadryl": "diphenhydramine", "claritin": "loratadine", "zyrtec": "cetirizine",
    "allegra": "fexofenadine", "prilosec": "omeprazole", "nexium": "esomeprazole",
    "prevacid": "lansoprazole", "protonix": "pantoprazole", "zantac": "ranitidine",
    "pepcid": "famotidine", "marinol": "dronabinol",
}

REGIONS = ["northeast", "midwest", "south", "west"]
GROUPS = ["beef", "pork", "poultry", "fish_seafood", "eggs", "milk"]

# Annual spending per consumer unit (USD), food at home, by census region.
EXPENDITURE = {
    "northeast": [228, 160, 173, 154, 58, 105],
    "midwest": [222, 155, 128, 96, 47, 97],
    "south": [223, 163, 148, 111, 54, 86],
    "west": [229, 134, 151, 137, 63, 106],
}
COSTS = {"beef": 5.29, "pork": 3.79, "poultry": 2.05, "fish_seafood": 7.95,
         "eggs": 1.85, "milk": 3.36}
CONSUMPTION = {"beef": 54.0, "pork": 46.0, "poultry": 106.0,
               "fish_seafood": 15.5, "eggs": 32.5, "milk": 154.0}

STATE_REGION = {}
for s in "CT ME MA NH RI VT NJ NY PA".split():
    STATE_REGION[s] = "northeast"
for s in "IL IN MI OH WI IA KS MN MO NE ND SD".split():
    STATE_REGION[s] = "midwest"
for s in "DE FL GA MD NC SC VA DC WV AL KY MS TN AR LA OK TX".split():
    STATE_REGION[s] = "south"
for s in "AZ CO ID MT NV NM UT WY AK CA HI OR WA".split():
    STATE_REGION[s] = "west"

# USPS 3-digit prefix ranges (inclusive). Territories and military prefixes
# (006-009, 090-099, 340, 962-966, 969) are intentionally absent.
ZIP_RANGES = [
    (5, 5, "NY"), (10, 27, "MA"), (28, 29, "RI"), (30, 38, "NH"), (39, 49, "ME"),
    (50, 54, "VT"), (55, 55, "MA"), (56, 59, "VT"), (60, 69, "CT"), (70, 89, "NJ"),
    (100, 149, "NY"), (150, 196, "PA"), (197, 199, "DE"), (200, 200, "DC"),
    (201, 201, "VA"), (202, 205, "DC"), (206, 219, "MD"), (220, 246, "VA"),
    (247, 268, "WV"), (270, 289, "NC"), (290, 299, "SC"), (300, 319, "GA"),
    (320, 339, "FL"), (341, 349, "FL"), (350, 369, "AL"), (370, 385, "TN"),
    (386, 397, "MS"), (398, 399, "GA"), (400, 427, "KY"), (430, 459, "OH"),
    (460, 479, "IN"), (480, 499, "MI"), (500, 528, "IA"), (530, 549, "WI"),
    (550, 567, "MN"), (569, 569, "DC"), (570, 577, "SD"), (580, 588, "ND"),
    (590, 599, "MT"), (600, 629, "IL"), (630, 658, "MO"), (660, 679, "KS"),
    (680, 693, "NE"), (700, 714, "LA"), (716, 729, "AR"), (730, 732, "OK"),
    (733, 733, "TX"), (734, 749, "OK"), (750, 799, "TX"), (800, 816, "CO"),
    (820, 831, "WY"), (832, 838, "ID"), (840, 847, "UT"), (850, 865, "AZ"),
    (870, 884, "NM"), (885, 885, "TX"), (889, 898, "NV"), (900, 961, "CA"),
    (967, 968, "HI"), (970, 979, "OR"), (980, 994, "WA"), (995, 999, "AK"),
]
UNUSED_PREFIXES = {213, 269, 343, 345, 348, 353, 419, 428, 429, 517, 518, 519,
                   529, 533, 536, 552, 568, 578, 579, 589, 621, 632, 642, 643,
                   659, 663, 682, 694, 695, 696, 697, 698, 699, 709, 715, 732,
                   742, 771, 817, 818, 819, 839, 848, 849, 854, 858, 861, 862,
                   866, 867, 868, 869, 876, 886, 887, 888, 892, 896, 899, 909,
                   929, 987}


def write_csv(path, header, rows):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def write_jsonl(path, rows):
    with open(path, "w") as f:
        for r in rows:
            f.write(json.dumps(r) + "\n")


def build_reference():
    write_csv(DATA / "nutrients.csv", ["food", "mcg_per_100g"],
              [[f, NUTRIENTS[f]] for f in FOODS])
    write_csv(DATA / "food_groups.csv", ["food", "group"],
              [[f, FOOD_GROUPS[f]] for f in FOODS])
    rows = []
    for food, phrases in SYNONYMS.items():
        rows += [[p, food] for p in phrases]
    write_csv(DATA / "ingredient_synonyms.csv", ["phrase", "food"], rows)

    rows = []
    for lo, hi, st in ZIP_RANGES:
        for p in range(lo, hi + 1):
            if p in UNUSED_PREFIXES:
                continue
            rows.append([f"{p:03d}", st, STATE_REGION[st]])
    write_csv(DATA / "zip_regions.csv", ["prefix", "state", "region"], rows)

    rows = [[t, cat] for cat, terms in TARGETS.items() for t in terms]
    assert len(rows) == 212, len(rows)
    assert len({r[0] for r in rows}) == 212
    write_csv(DATA / "targets.csv", ["term", "category"], rows)
    assert len(CONTROLS) == 27
    write_csv(DATA / "controls.csv", ["term", "category"],
              [[t, "control"] for t in CONTROLS])

    ind = dict(INDICATIONS)
    for brand, generic in BRANDS.items():
        ind[brand] = INDICATIONS[generic]
    write_csv(DATA / "indications.csv",
              ["term", "n_indications", "n_pain_indications"],
              [[t, a, b] for t, (a, b) in sorted(ind.items())])

    write_csv(DATA / "expenditure.csv", ["region", "group", "dollars"],
              [[r, g, EXPENDITURE[r][i]] for r in REGIONS for i, g in enumerate(GROUPS)])
    write_csv(DATA / "costs.csv", ["group", "dollars_per_unit"],
              [[g, COSTS[g]] for g in GROUPS])
    write_csv(DATA / "consumption.csv", ["group", "per_capita"],
              [[g, CONSUMPTION[g]] for g in GROUPS])

    write_jsonl(DATA / "recipes.jsonl",
                [{"title": t, "ingredients": ing} for t, ing in RECIPES])


FIXTURE_50_TRACKED = [
    "Beef Stew", "Shrimp Scampi", "Clam Chowder", "Grilled Mackerel",
    "Baked Trout", "Grilled Salmon", "Salmon Patties", "Tuna Salad",
    "Tuna Casserole", "Pulled Pork", "Pork Chops", "Baked Ham",
    "Spaghetti Carbonara", "Meatloaf", "Roast Beef", "Beef Tacos",
    "Chili Con Carne", "Swedish Meatballs", "Roast Turkey", "Turkey Chili",
    "Turkey Club Sandwich", "Fried Chicken", "Chicken Soup", "Chicken Parmesan",
    "Chicken Curry", "Jambalaya", "Deviled Eggs", "Scrambled Eggs",
    "Quiche Lorraine", "Shakshuka", "Pancakes", "Banana Bread", "Rice Pudding",
    "Mac and Cheese", "Milkshake", "Tomato Soup", "Bruschetta", "Fresh Salsa",
    "Ratatouille", "Seafood Paella", "Lobster Bisque",
]
FIXTURE_50_UNTRACKED = [
    ("Fruit Salad", ["apple", "banana"]),
    ("Guacamole", ["avocados", "lime", "onion"]),
    ("Hummus", ["chickpeas", "tahini", "lemon"]),
    ("Lentil Soup", ["lentils", "carrots", "vegetable stock"]),
    ("Vegetable Stir Fry", ["broccoli", "snap peas", "soy sauce"]),
    ("Apple Crisp", ["apples", "oats", "brown sugar"]),
    ("Vegan Chocolate Cake", ["flour", "cocoa", "almond milk"]),
    ("Vegetable Curry", ["coconut milk", "chickpeas", "spinach"]),
    ("Eggplant Stir Fry", ["eggplant", "soy sauce", "garlic"]),
]


def build_fixture_corpus():
    by_title = dict(RECIPES)
    rows = [{"title": t, "ingredients": by_title[t]} for t in FIXTURE_50_TRACKED]
    rows += [{"title": t, "ingredients": i} for t, i in FIXTURE_50_UNTRACKED]
    random.Random(50).shuffle(rows)
    assert len(rows) == 50 and len(FIXTURE_50_TRACKED) == 41
    write_jsonl(FIXTURES / "recipes_50.jsonl", rows)


# Dishes that are not in the corpus. Gold label is "none": the searcher wanted a
# dish the corpus does not contain, whatever the matcher does with it.
ABSENT_DISHES = [
    "chicken fried steak", "chicken tortilla soup", "beef pho", "pork tacos",
    "salmon burgers", "turkey sandwich", "egg muffins", "tuna sandwich",
    "chicken wraps", "beef ramen", "shrimp pasta", "lobster mac and cheese",
    "fish tacos", "chicken tacos", "beef jerky", "egg nog", "tomato pie",
    "tuna poke bowl", "salmon sushi", "pork dumpling soup", "chicken nuggets",
    "beef curry", "pork curry", "shrimp curry", "turkey curry",
    "chicken noodle casserole", "crab rangoon", "lobster tail", "milk pudding",
    "egg curry", "tomato rice", "beef soup", "pork soup", "salmon soup",
    "tuna steak sandwich", "steak and eggs", "bacon and eggs", "ham sandwich",
    "chicken pasta", "beef pasta", "shrimp salad", "crab salad",
    "salmon salad", "turkey salad", "chicken rice soup",
]
NON_RECIPE = [
    "salmon fishing license", "turkey vacation packages", "chicken coop plans",
    "beef prices 2015", "milk allergy symptoms", "tuna fishing charters",
    "egg freezing cost", "ham radio license", "trout stream map",
    "tomato plant diseases", "shrimp boat for sale", "pork belly futures",
    "crab apple tree", "lobster festival maine", "chicken pox vaccine",
    "turkey visa requirements", "egg donor compensation", "milk delivery service",
    "beef cattle prices", "salmon color paint", "weather tomorrow",
    "bank of america login", "cheap flights to denver", "nfl scores",
    "used cars near me", "how tall is mount everest", "netflix new releases",
    "home depot hours", "facebook login", "amazon prime day deals",
    "tomato festival spain", "mackerel sky meaning", "tuna can crafts",
    "mussels anatomy", "oyster card london", "pork pie hat", "beef recall 2016",
    "egg hunt near me", "milk carton costume", "chicken dance song",
]
CUE_LIKE = [
    "recipe for disaster", "cook county clerk", "how to make money online",
    "how to make slime", "cook islands travel", "recipes for success book",
    "how to make a resume", "cook childrens hospital", "turkey cook time calculator",
    "how to make chicken coop", "how to make a salmon ladder",
    "cook county property tax", "how to make paper flowers", "recipe box app",
    "how to make a website", "captain cook biography", "recipes magazine subscription",
    "how to make soap", "cook book stand", "how to make candles",
    "how to make a budget", "cook out menu prices", "recipe card template",
    "how to make friends", "how to make egg carton crafts", "cook medical jobs",
    "how to make milk paint", "how to make a tomato cage", "recipes app for ipad",
    "how to make beef jerky gun", "cook time for frozen pizza", "recipe cards printable",
    "how to make a paper airplane", "cook inlet fishing", "how to make a podcast",
    "how to make a pork barrel bill", "recipe organizer binder", "how to make ice",
    "how to make a bed", "cook stove parts",
]
MISSPELL_SEED = 400


def misspell(word, rng):
    if len(word) < 4:
        return word + word[-1]
    i = rng.randrange(1, len(word) - 1)
    if rng.random() < 0.5:
        return word[:i] + word[i + 1:]
    return word[:i] + word[i + 1] + word[i] + word[i + 2:]


def build_labeled_fixture():
    rng = random.Random(MISSPELL_SEED)
    titles = [t.lower() for t, ing in RECIPES if not t in
              {"Guacamole", "Fruit Salad", "Hummus", "Vegetable Curry", "Eggplant Stir Fry"}]
    rows = []
    clean_templates = ["{t} recipe", "{t} recipes", "how to make {t}", "{t}",
                       "easy {t} recipe", "best {t} recipe", "{t} recipe easy",
                       "homemade {t}", "cook {t}", "{t} recipe from scratch"]
    for _ in range(170):
        t = rng.choice(titles)
        rows.append((rng.choice(clean_templates).format(t=t), t))
    variant_templates = ["{t} recipe slow cooker", "{t} recipe instant pot",
                         "healthy {t} recipes", "{t} recipe for two",
                         "{t} recipe oven", "quick {t} recipe"]
    for _ in range(40):
        t = rng.choice(titles)
        rows.append((rng.choice(variant_templates).format(t=t), t))
    multi = [t for t in titles if len(t.split()) >= 2]
    for _ in range(35):
        t = rng.choice(multi)
        toks = t.split()
        del toks[rng.randrange(len(toks))]
        rows.append((" ".join(toks) + " recipe", t))
    for _ in range(30):
        t = rng.choice(titles)
        toks = t.split()
        j = max(range(len(toks)), key=lambda k: len(toks[k]))
        toks[j] = misspell(toks[j], rng)
        rows.append((" ".join(toks) + " recipe", t))
    for d in ABSENT_DISHES:
        rows.append((rng.choice(["{t} recipe", "how to make {t}", "{t} recipes"]).format(t=d), ""))
    for q in NON_RECIPE:
        rows.append((q, ""))
    for q in CUE_LIKE:
        rows.append((q, ""))
    assert len(rows) == 400, len(rows)
    rng.shuffle(rows)
    write_csv(FIXTURES / "labeled_400.csv", ["query", "gold_recipe"], rows)


if __name__ == "__main__":
    build_reference()
    build_fixture_corpus()
    build_labeled_fixture()
