# GAN module initialization
