package main

func spin() {
	for {
	}
}

// A busy goroutine keeps the program alive while main blocks.
func main() {
	ch := make(chan int)
	go spin()
	<-ch
}
