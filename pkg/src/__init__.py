"""Multi-mode global scheduling: model, simulator, transition analysis and validation"""
